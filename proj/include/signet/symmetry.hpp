#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "signet/errors.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

/// Node permutation, 1-indexed: map[i-1] = phi(i).
struct Permutation {
    std::vector<int> map;

    explicit Permutation(std::vector<int> m) : map(std::move(m)) {
        std::vector<char> hit(map.size(), 0);
        for (int v : map) {
            if (v < 1 || v > static_cast<int>(map.size()) || hit[static_cast<std::size_t>(v - 1)])
                throw parse_error("Permutation: not a bijection on 1..n");
            hit[static_cast<std::size_t>(v - 1)] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> m(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i + 1;
        return Permutation(std::move(m));
    }

    int size() const { return static_cast<int>(map.size()); }
    int of(int i) const { return map[static_cast<std::size_t>(i - 1)]; }
    bool is_identity() const {
        for (int i = 1; i <= size(); ++i)
            if (of(i) != i) return false;
        return true;
    }

    Permutation inverse() const {
        std::vector<int> inv(map.size());
        for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>(of(i) - 1)] = i;
        return Permutation(std::move(inv));
    }

    Permutation compose(const Permutation& other) const {  // this after other
        std::vector<int> m(map.size());
        for (int i = 1; i <= size(); ++i) m[static_cast<std::size_t>(i - 1)] = of(other.of(i));
        return Permutation(std::move(m));
    }

    /// Permutation matrix J with J_ij = 1 iff phi(i) = j.
    Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(size(), size());
        for (int i = 1; i <= size(); ++i) j(i - 1, of(i) - 1) = 1.0;
        return j;
    }

    /// [phi(x)]_i = x_{phi(i)}
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        if (x.size() != size()) throw parse_error("Permutation: dimension mismatch");
        Eigen::VectorXd out(x.size());
        for (int i = 1; i <= size(); ++i) out(i - 1) = x(of(i) - 1);
        return out;
    }
};

/// Gauge-conjugated automorphism J' = G_t J G_t acting by
/// [phi'(x)]_i = sigma_i sigma_{phi(i)} x_{phi(i)}.
struct SignedAutomorphism {
    Permutation perm;
    GaugeTransform gauge;

    Eigen::MatrixXd matrix() const {
        return gauge.matrix() * perm.matrix() * gauge.matrix();
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        if (x.size() != perm.size()) throw parse_error("SignedAutomorphism: dimension mismatch");
        Eigen::VectorXd out(x.size());
        for (int i = 1; i <= perm.size(); ++i) {
            int r = perm.of(i);
            out(i - 1) = gauge.of(i) * gauge.of(r) * x(r - 1);
        }
        return out;
    }
};

inline SignedAutomorphism make_signed_automorphism(const Permutation& perm, const GaugeTransform& gauge) {
    if (perm.size() != gauge.size())
        throw parse_error("make_signed_automorphism: dimension mismatch");
    return SignedAutomorphism{perm, gauge};
}

/// Nodes fixed by the underlying permutation. Coordinate i then satisfies
/// [phi'(x)]_i = sigma_i^2 x_i = x_i identically.
inline std::vector<int> fixed_points(const SignedAutomorphism& sa) {
    std::vector<int> fix;
    for (int i = 1; i <= sa.perm.size(); ++i)
        if (sa.perm.of(i) == i) fix.push_back(i);
    return fix;
}

/// True iff perm commutes with the magnitude adjacency |A_s|:
/// |a_{ij}| = |a_{phi(i)phi(j)}| for all i, j (tolerance for floats).
inline bool is_automorphism(const SignedGraph& g, const Permutation& perm, double tol = 1e-12) {
    if (perm.size() != g.node_count()) return false;
    for (int i = 1; i <= g.node_count(); ++i)
        for (int j = i + 1; j <= g.node_count(); ++j)
            if (std::abs(std::abs(g.weight(i, j)) - std::abs(g.weight(perm.of(i), perm.of(j)))) > tol)
                return false;
    return true;
}

/// True iff sgn(a_{ij}) = sgn(a_{phi(i)phi(j)}) on every edge.
/// Requires perm to be an automorphism of |A_s|.
inline bool preserves_edge_signs(const SignedGraph& g, const Permutation& perm) {
    if (!is_automorphism(g, perm))
        throw parse_error("preserves_edge_signs: permutation is not an automorphism of |A_s|");
    for (const Edge& e : g.edges())
        if (sgn(e.w) != sgn(g.weight(perm.of(e.u), perm.of(e.v)))) return false;
    return true;
}

namespace detail {

inline void automorphism_backtrack(const SignedGraph& g, std::vector<int>& map,
                                   std::vector<char>& used, int next,
                                   std::vector<Permutation>& out, std::size_t limit,
                                   const std::vector<std::vector<double>>& inv, double tol) {
    const int n = g.node_count();
    if (out.size() >= limit) return;
    if (next > n) {
        out.emplace_back(map);
        return;
    }
    for (int cand = 1; cand <= n; ++cand) {
        if (used[static_cast<std::size_t>(cand - 1)]) continue;
        if (inv[static_cast<std::size_t>(next - 1)] != inv[static_cast<std::size_t>(cand - 1)]) continue;
        bool ok = true;
        for (int j = 1; j < next && ok; ++j)
            if (std::abs(std::abs(g.weight(next, j)) -
                         std::abs(g.weight(cand, map[static_cast<std::size_t>(j - 1)]))) > tol)
                ok = false;
        if (!ok) continue;
        map[static_cast<std::size_t>(next - 1)] = cand;
        used[static_cast<std::size_t>(cand - 1)] = 1;
        automorphism_backtrack(g, map, used, next + 1, out, limit, inv, tol);
        used[static_cast<std::size_t>(cand - 1)] = 0;
        if (out.size() >= limit) return;
    }
}

}  // namespace detail

/// Exhaustive automorphism enumeration over |A_s| with pruning by the
/// sorted incident-|weight| multiset of each node. Exact for integer
/// weights, tolerance 1e-12 for floats. The identity is always first.
inline std::vector<Permutation> find_automorphisms(const SignedGraph& g, std::size_t limit = 10000,
                                                   bool allow_large = false) {
    const int n = g.node_count();
    if (n > 12 && !allow_large)
        throw parse_error("find_automorphisms: n > 12 needs the allow_large override");
    // Node invariant: sorted multiset of incident |weights|.
    std::vector<std::vector<double>> inv(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        for (const auto& [nb, w] : g.neighbors(i)) {
            (void)nb;
            inv[static_cast<std::size_t>(i - 1)].push_back(std::abs(w));
        }
        std::sort(inv[static_cast<std::size_t>(i - 1)].begin(), inv[static_cast<std::size_t>(i - 1)].end());
    }
    std::vector<Permutation> out;
    std::vector<int> map(static_cast<std::size_t>(n), 0);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    detail::automorphism_backtrack(g, map, used, 1, out, limit, inv, 1e-12);
    // Depth-first order starts from the identity assignment, so the
    // identity leads the list whenever limit >= 1.
    std::stable_sort(out.begin(), out.end(), [](const Permutation& a, const Permutation& b) {
        return a.is_identity() && !b.is_identity();
    });
    return out;
}

}  // namespace signet
