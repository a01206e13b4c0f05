#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "signet/errors.hpp"

namespace signet {

/// One undirected edge with a signed, nonzero weight. Nodes are 1-indexed.
struct Edge {
    int u;
    int v;
    double w;
};

/// Undirected weighted graph with signed, nonzero edge weights.
/// At most one edge per unordered pair, no self-loops, all weights finite.
class SignedGraph {
public:
    SignedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 1) throw parse_error("SignedGraph: node count must be >= 1");
        std::set<std::pair<int, int>> seen;
        adj_.assign(static_cast<std::size_t>(n_) + 1, {});
        for (const Edge& e : edges_) {
            if (e.u < 1 || e.u > n_ || e.v < 1 || e.v > n_)
                throw parse_error("SignedGraph: edge endpoint out of range");
            if (e.u == e.v) throw parse_error("SignedGraph: self-loops are not allowed");
            if (!std::isfinite(e.w) || e.w == 0.0)
                throw parse_error("SignedGraph: edge weights must be finite and nonzero");
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert(key).second)
                throw parse_error("SignedGraph: duplicate edge between nodes " +
                                  std::to_string(e.u) + " and " + std::to_string(e.v));
            adj_[static_cast<std::size_t>(e.u)].push_back({e.v, e.w});
            adj_[static_cast<std::size_t>(e.v)].push_back({e.u, e.w});
        }
    }

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Neighbors of node u (1-indexed) as (neighbor, weight) pairs.
    const std::vector<std::pair<int, double>>& neighbors(int u) const {
        return adj_[static_cast<std::size_t>(u)];
    }

    /// Weight of edge {u,v}, or 0 if absent.
    double weight(int u, int v) const {
        for (const auto& [nb, w] : adj_[static_cast<std::size_t>(u)])
            if (nb == v) return w;
        return 0.0;
    }

    bool has_edge(int u, int v) const { return weight(u, v) != 0.0; }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

/// Diagonal +-1 similarity transform G_t = diag(sigma).
/// G_t = G_t^T = G_t^{-1}.
struct GaugeTransform {
    std::vector<int> sigma;  // entries +1 or -1, 1-indexed via sigma[i-1]

    explicit GaugeTransform(std::vector<int> s) : sigma(std::move(s)) {
        for (int v : sigma)
            if (v != 1 && v != -1) throw parse_error("GaugeTransform: entries must be +-1");
    }

    static GaugeTransform identity(int n) { return GaugeTransform(std::vector<int>(static_cast<std::size_t>(n), 1)); }

    int size() const { return static_cast<int>(sigma.size()); }
    int of(int node) const { return sigma[static_cast<std::size_t>(node - 1)]; }

    Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
        for (int i = 0; i < size(); ++i) m(i, i) = sigma[static_cast<std::size_t>(i)];
        return m;
    }

    /// [g(x)]_i = sigma_i x_i
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        if (x.size() != size()) throw parse_error("GaugeTransform: dimension mismatch");
        Eigen::VectorXd out(x.size());
        for (int i = 0; i < x.size(); ++i) out(i) = sigma[static_cast<std::size_t>(i)] * x(i);
        return out;
    }

    GaugeTransform negated() const {
        std::vector<int> s = sigma;
        for (int& v : s) v = -v;
        return GaugeTransform(std::move(s));
    }
};

enum class BalanceStatus { balanced, unbalanced };

/// Outcome of structural-balance certification: either a certifying gauge
/// with its bipartition, or a witness cycle whose edge-sign product is
/// negative.
struct BalanceCertificate {
    BalanceStatus status;
    std::optional<GaugeTransform> gauge;       // present iff balanced
    std::vector<int> positive_part;            // {i : sigma_i = +1}
    std::vector<int> negative_part;            // {i : sigma_i = -1}
    std::vector<int> witness_cycle;            // present iff unbalanced
    std::vector<int> component;                // component id per node, 1-indexed via [i-1]

    bool balanced() const { return status == BalanceStatus::balanced; }
};

inline int sgn(double w) { return w > 0 ? 1 : (w < 0 ? -1 : 0); }

/// Signed adjacency matrix A_s: symmetric, [A_s]_uv = w for each edge.
inline Eigen::MatrixXd signed_adjacency(const SignedGraph& g) {
    const int n = g.node_count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        a(e.u - 1, e.v - 1) = e.w;
        a(e.v - 1, e.u - 1) = e.w;
    }
    return a;
}

/// Signed Laplacian L_s = D_s - A_s with D_ii = sum of |incident weights|.
inline Eigen::MatrixXd signed_laplacian(const SignedGraph& g) {
    const int n = g.node_count();
    Eigen::MatrixXd l = -signed_adjacency(g);
    for (int i = 1; i <= n; ++i) {
        double d = 0.0;
        for (const auto& [nb, w] : g.neighbors(i)) {
            (void)nb;
            d += std::abs(w);
        }
        l(i - 1, i - 1) = d;
    }
    return l;
}

/// Gauge-transformed Laplacian L_{G_t} = G_t L_s G_t.
/// Diagonal: sum_k |A_ik|; off-diagonal: -sigma_i sigma_j A_ij.
inline Eigen::MatrixXd gauge_transformed_laplacian(const SignedGraph& g, const GaugeTransform& gauge) {
    if (gauge.size() != g.node_count())
        throw parse_error("gauge_transformed_laplacian: gauge length != node count");
    Eigen::MatrixXd l = signed_laplacian(g);
    for (int i = 0; i < l.rows(); ++i)
        for (int j = 0; j < l.cols(); ++j)
            if (i != j) l(i, j) *= gauge.sigma[static_cast<std::size_t>(i)] * gauge.sigma[static_cast<std::size_t>(j)];
    return l;
}

/// Sign product over a cycle's edges, +1 or -1. The sequence is closed
/// implicitly (last node connects back to the first). Throws if any
/// consecutive pair is not an edge.
inline int cycle_sign_product(const SignedGraph& g, const std::vector<int>& cycle) {
    if (cycle.size() < 3) throw parse_error("cycle_sign_product: cycle needs at least 3 nodes");
    int prod = 1;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
        int u = cycle[k];
        int v = cycle[(k + 1) % cycle.size()];
        double w = g.weight(u, v);
        if (w == 0.0)
            throw parse_error("cycle_sign_product: no edge between " + std::to_string(u) +
                              " and " + std::to_string(v));
        prod *= sgn(w);
    }
    return prod;
}

/// Structural-balance certification by breadth-first 2-coloring on edge
/// signs. Works per connected component; the certifying gauge is
/// normalized so the lowest-indexed node of each component gets +1.
/// A color conflict yields a witness cycle through the BFS tree.
inline BalanceCertificate check_structural_balance(const SignedGraph& g) {
    const int n = g.node_count();
    std::vector<int> color(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> depth(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> comp(static_cast<std::size_t>(n) + 1, 0);
    int comp_id = 0;

    for (int root = 1; root <= n; ++root) {
        if (color[static_cast<std::size_t>(root)] != 0) continue;
        ++comp_id;
        color[static_cast<std::size_t>(root)] = 1;
        comp[static_cast<std::size_t>(root)] = comp_id;
        depth[static_cast<std::size_t>(root)] = 0;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const auto& [v, w] : g.neighbors(u)) {
                int expected = color[static_cast<std::size_t>(u)] * sgn(w);
                if (color[static_cast<std::size_t>(v)] == 0) {
                    color[static_cast<std::size_t>(v)] = expected;
                    parent[static_cast<std::size_t>(v)] = u;
                    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
                    comp[static_cast<std::size_t>(v)] = comp_id;
                    queue.push_back(v);
                } else if (color[static_cast<std::size_t>(v)] != expected) {
                    // Conflict edge (u,v): walk both endpoints up to their
                    // lowest common ancestor; the closed walk has negative
                    // sign product because tree edges are color-consistent.
                    std::vector<int> up_u{u}, up_v{v};
                    int a = u, b = v;
                    while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
                        a = parent[static_cast<std::size_t>(a)];
                        up_u.push_back(a);
                    }
                    while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
                        b = parent[static_cast<std::size_t>(b)];
                        up_v.push_back(b);
                    }
                    while (a != b) {
                        a = parent[static_cast<std::size_t>(a)];
                        b = parent[static_cast<std::size_t>(b)];
                        up_u.push_back(a);
                        up_v.push_back(b);
                    }
                    // up_u ends at the LCA; append v's side in reverse,
                    // skipping the duplicated LCA.
                    std::vector<int> cycle = up_u;
                    for (auto it = up_v.rbegin() + 1; it != up_v.rend(); ++it) cycle.push_back(*it);
                    BalanceCertificate cert;
                    cert.status = BalanceStatus::unbalanced;
                    cert.witness_cycle = std::move(cycle);
                    cert.component.assign(comp.begin() + 1, comp.end());
                    return cert;
                }
            }
        }
    }

    BalanceCertificate cert;
    cert.status = BalanceStatus::balanced;
    std::vector<int> sigma(color.begin() + 1, color.end());
    cert.gauge = GaugeTransform(sigma);
    for (int i = 1; i <= n; ++i) {
        if (sigma[static_cast<std::size_t>(i - 1)] > 0)
            cert.positive_part.push_back(i);
        else
            cert.negative_part.push_back(i);
    }
    cert.component.assign(comp.begin() + 1, comp.end());
    return cert;
}

/// Lemma-style spectral balance test: true iff the smallest eigenvalue of
/// L_s has magnitude <= tol * max(1, largest eigenvalue magnitude).
inline bool zero_eigenvalue_check(const SignedGraph& g, double tol) {
    if (tol <= 0) throw parse_error("zero_eigenvalue_check: tol must be > 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(signed_laplacian(g));
    if (solver.info() != Eigen::Success)
        throw numeric_error("zero_eigenvalue_check: eigensolver failed");
    const auto& vals = solver.eigenvalues();
    double scale = std::max(1.0, std::abs(vals(vals.size() - 1)));
    return std::abs(vals(0)) <= tol * scale;
}

}  // namespace signet
