#pragma once

#include <random>
#include <vector>

#include "signet/signed_graph.hpp"

namespace signet::test {

/// Random connected signed graph: Erdos-Renyi(edge_prob) with weights of
/// magnitude in [0.5, 2] and Bernoulli(0.5) signs; resampled until
/// connected.
inline SignedGraph random_connected_graph(std::mt19937_64& rng, int n, double edge_prob = 0.4) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    for (;;) {
        std::vector<Edge> edges;
        for (int u = 1; u <= n; ++u)
            for (int v = u + 1; v <= n; ++v)
                if (unit(rng) < edge_prob) {
                    double w = mag(rng) * (unit(rng) < 0.5 ? 1.0 : -1.0);
                    edges.push_back({u, v, w});
                }
        SignedGraph g(n, edges);
        // connectivity check
        std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
        std::vector<int> stack{1};
        seen[1] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : g.neighbors(u)) {
                (void)w;
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        if (count == n) return g;
    }
}

/// Same topology with all signs forced positive (used to build balanced
/// graphs with a prescribed gauge: flip edge signs to match sigma).
inline SignedGraph with_gauge_signs(const SignedGraph& g, const std::vector<int>& sigma) {
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        double mag = std::abs(e.w);
        edges.push_back({e.u, e.v, mag * sigma[static_cast<std::size_t>(e.u - 1)] *
                                       sigma[static_cast<std::size_t>(e.v - 1)]});
    }
    return SignedGraph(g.node_count(), edges);
}

}  // namespace signet::test
