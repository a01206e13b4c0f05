#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

/// Probabilists' Hermite polynomial He_order(x) via the three-term
/// recurrence He_{k+1} = x He_k - k He_{k-1}.
inline double hermite(int order, double x) {
    if (order < 0) throw parse_error("hermite: order must be >= 0");
    double prev = 1.0;  // He_0
    if (order == 0) return prev;
    double cur = x;  // He_1
    for (int k = 1; k < order; ++k) {
        double next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Tensor-product Hermite dictionary over n coordinates with per-coordinate
/// orders 0..p; size (p+1)^n. Multi-indices are enumerated in lexicographic
/// order with the last coordinate varying fastest, so index 0 is the
/// constant function and the unit indices are the coordinate functions.
struct Dictionary {
    int n = 0;
    int max_order = 0;
    std::vector<std::vector<int>> multi_indices;

    int size() const { return static_cast<int>(multi_indices.size()); }

    /// Row index of the coordinate function He_1(x_i) = x_i (i 1-indexed).
    int coordinate_index(int i) const {
        // With last-fastest enumeration, index of unit tuple e_i is
        // (p+1)^(n-i).
        int idx = 1;
        for (int k = 0; k < n - i; ++k) idx *= max_order + 1;
        return idx;
    }
};

inline Dictionary build_dictionary(int n, int p, std::int64_t cap = 10000) {
    if (n < 1 || p < 1) throw parse_error("build_dictionary: need n >= 1 and p >= 1");
    std::int64_t size = 1;
    for (int i = 0; i < n; ++i) {
        size *= p + 1;
        if (size > cap)
            throw parse_error("build_dictionary: dictionary size " + std::to_string(size) +
                              "+ exceeds cap " + std::to_string(cap));
    }
    Dictionary d;
    d.n = n;
    d.max_order = p;
    d.multi_indices.reserve(static_cast<std::size_t>(size));
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::int64_t k = 0; k < size; ++k) {
        d.multi_indices.push_back(idx);
        for (int pos = n - 1; pos >= 0; --pos) {
            if (++idx[static_cast<std::size_t>(pos)] <= p) break;
            idx[static_cast<std::size_t>(pos)] = 0;
        }
    }
    return d;
}

/// psi_k(x) = prod_i He_{j_i}(x_i) for multi-index j of entry k.
inline Eigen::VectorXd evaluate_dictionary(const Dictionary& d, const Eigen::VectorXd& x) {
    if (x.size() != d.n) throw parse_error("evaluate_dictionary: dimension mismatch");
    // Precompute He_j(x_i) for all coordinates and orders.
    Eigen::MatrixXd he(d.n, d.max_order + 1);
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j <= d.max_order; ++j) he(i, j) = hermite(j, x(i));
    Eigen::VectorXd psi(d.size());
    for (int k = 0; k < d.size(); ++k) {
        double v = 1.0;
        const auto& mi = d.multi_indices[static_cast<std::size_t>(k)];
        for (int i = 0; i < d.n; ++i) v *= he(i, mi[static_cast<std::size_t>(i)]);
        psi(k) = v;
    }
    return psi;
}

/// Snapshot pairs (x_k, x_{k+1}) at uniform spacing dt. Rows of Y are
/// dt-ahead samples of the rows of X.
struct SnapshotPairs {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    double dt = 0.0;

    int count() const { return static_cast<int>(X.rows()); }
};

/// Consecutive sample pairs of a trajectory restricted to [t_start, t_end].
inline SnapshotPairs assemble_snapshots(const Trajectory& traj, double t_start, double t_end) {
    const double eps = 1e-9;
    std::vector<int> in_window;
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] >= t_start - eps && traj.times[k] <= t_end + eps)
            in_window.push_back(static_cast<int>(k));
    if (in_window.size() < 2)
        throw parse_error("assemble_snapshots: window contains fewer than 2 samples");
    const int m = static_cast<int>(in_window.size()) - 1;
    const auto n = traj.states.front().size();
    SnapshotPairs pairs;
    pairs.dt = traj.dt;
    pairs.X.resize(m, n);
    pairs.Y.resize(m, n);
    for (int r = 0; r < m; ++r) {
        pairs.X.row(r) = traj.states[static_cast<std::size_t>(in_window[static_cast<std::size_t>(r)])];
        pairs.Y.row(r) = traj.states[static_cast<std::size_t>(in_window[static_cast<std::size_t>(r + 1)])];
    }
    return pairs;
}

/// EDMD output: the finite-dimensional Koopman approximation K, its
/// eigendecomposition, and the Koopman modes of the full-state observable.
/// modes.row(j) is the mode paired with eigenvalues(j). amplitudes(j) is
/// the mean |phi_j(x_m)| over the snapshots times the mode norm, used to
/// rank degenerate eigenvalues.
struct EDMDResult {
    Eigen::MatrixXd K;
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd right_eigvecs;  // eigenfunction coefficients, one column per pair
    Eigen::MatrixXcd modes;          // one row per eigenvalue, n columns
    Eigen::VectorXd amplitudes;
    double dt = 0.0;
    double residual = 0.0;
    bool rank_deficient = false;
};

/// Least-squares Koopman fit: G = Psi_X^T Psi_X / M, A = Psi_X^T Psi_Y / M,
/// K = (G + reg I)^+ A. Modes of the full-state observable come from
/// x = B^T psi(x) projected through the left eigenvectors (rows of
/// Xi^{-1} B for eigenvector matrix Xi).
inline EDMDResult edmd_fit(const SnapshotPairs& pairs, const Dictionary& d, double reg = 0.0) {
    if (pairs.count() < 1) throw parse_error("edmd_fit: need at least one snapshot pair");
    if (reg < 0) throw parse_error("edmd_fit: reg must be >= 0");
    const int m = pairs.count();
    const int nk = d.size();
    const int n = d.n;
    if (pairs.X.cols() != n) throw parse_error("edmd_fit: snapshot dimension mismatch");

    Eigen::MatrixXd psi_x(m, nk), psi_y(m, nk);
    for (int r = 0; r < m; ++r) {
        psi_x.row(r) = evaluate_dictionary(d, pairs.X.row(r).transpose());
        psi_y.row(r) = evaluate_dictionary(d, pairs.Y.row(r).transpose());
    }

    Eigen::MatrixXd G = psi_x.transpose() * psi_x / m;
    Eigen::MatrixXd A = psi_x.transpose() * psi_y / m;
    if (reg > 0) G += reg * Eigen::MatrixXd::Identity(nk, nk);

    // Pseudoinverse with tolerance 1e-10 * s_max.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw numeric_error("edmd_fit: SVD of G failed");
    const Eigen::VectorXd& sv = svd.singularValues();
    double cut = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    int grank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) {
            inv_sv(i) = 1.0 / sv(i);
            ++grank;
        }

    EDMDResult result;
    result.rank_deficient = grank < nk;
    result.dt = pairs.dt;
    result.K = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose() * A;
    result.residual = (psi_y - psi_x * result.K).norm() / std::max(psi_y.norm(), 1e-300);

    Eigen::EigenSolver<Eigen::MatrixXd> eig(result.K);
    if (eig.info() != Eigen::Success) throw numeric_error("edmd_fit: eigensolver failed");
    result.eigenvalues = eig.eigenvalues();
    result.right_eigvecs = eig.eigenvectors();

    // Full-state observable x = B^T psi(x): B picks the coordinate entries.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, n);
    for (int i = 1; i <= n; ++i) B(d.coordinate_index(i), i - 1) = 1.0;
    Eigen::MatrixXcd modes_t =
        result.right_eigvecs.completeOrthogonalDecomposition().solve(B.cast<std::complex<double>>());
    result.modes = modes_t;  // row j = mode of eigenpair j

    // Amplitude score: mean eigenfunction magnitude over the data times
    // the mode norm. Separates the physical zero mode from the constant
    // function (whose mode vanishes) at the shared eigenvalue 1.
    Eigen::MatrixXcd phi = psi_x.cast<std::complex<double>>() * result.right_eigvecs;  // m x nk
    result.amplitudes.resize(nk);
    for (int j = 0; j < nk; ++j)
        result.amplitudes(j) = phi.col(j).cwiseAbs().mean() * result.modes.row(j).norm();
    return result;
}

struct ZeroMode {
    std::complex<double> eigenvalue;
    Eigen::VectorXd mode;
    int index = 0;
};

/// Picks the eigenpair whose eigenvalue lies within tol of 1, ranked by
/// amplitude. Eigenvalue 1 is degenerate whenever the constant function
/// sits in the dictionary, so nearest-|mu - 1| alone would select a mode
/// that vanishes on the full-state observable.
inline ZeroMode extract_zero_mode(const EDMDResult& r, double tol) {
    if (r.eigenvalues.size() == 0) throw numeric_error("extract_zero_mode: empty eigendecomposition");
    int best = -1;
    double best_amp = -1.0;
    for (int j = 0; j < r.eigenvalues.size(); ++j) {
        if (std::abs(r.eigenvalues(j) - std::complex<double>(1.0, 0.0)) > tol) continue;
        if (r.amplitudes(j) > best_amp) {
            best_amp = r.amplitudes(j);
            best = j;
        }
    }
    if (best < 0) {
        double nearest = 1e300;
        for (int j = 0; j < r.eigenvalues.size(); ++j)
            nearest = std::min(nearest, std::abs(r.eigenvalues(j) - std::complex<double>(1.0, 0.0)));
        throw numeric_error("extract_zero_mode: no eigenvalue within " + std::to_string(tol) +
                            " of 1 (nearest at distance " + std::to_string(nearest) + ")");
    }
    Eigen::VectorXcd mode = r.modes.row(best).transpose();
    double norm = mode.norm();
    if (norm == 0.0) throw numeric_error("extract_zero_mode: zero mode vector vanishes");
    if (mode.imag().norm() > tol * norm)
        throw numeric_error("extract_zero_mode: mode has a non-negligible imaginary part");
    return ZeroMode{r.eigenvalues(best), mode.real(), best};
}

/// Sign pattern of a Koopman mode, global sign normalized so the first
/// unambiguous entry is +1. Entries below dead_zone * max|mode_i| are
/// flagged ambiguous (their sign is reported from the raw value).
struct BipartitionEstimate {
    std::vector<int> signs;
    std::vector<int> ambiguous;  // 1-indexed nodes inside the dead zone
    int mode_index = 0;
    double eigenvalue_gap = 0.0;  // |mu - 1|
};

inline BipartitionEstimate bipartition_from_mode(const Eigen::VectorXd& mode, double dead_zone = 0.1) {
    double peak = mode.cwiseAbs().maxCoeff();
    if (peak == 0.0) throw parse_error("bipartition_from_mode: mode is identically zero");
    BipartitionEstimate est;
    int flip = 0;
    for (int i = 0; i < mode.size(); ++i) {
        bool amb = std::abs(mode(i)) < dead_zone * peak;
        if (amb) est.ambiguous.push_back(i + 1);
        int s = mode(i) >= 0 ? 1 : -1;
        if (flip == 0 && !amb) flip = s;
        est.signs.push_back(s);
    }
    if (static_cast<int>(est.ambiguous.size()) == mode.size())
        throw parse_error("bipartition_from_mode: every entry is inside the dead zone");
    for (int& s : est.signs) s *= flip;
    return est;
}

/// True iff the estimated signs match the certificate's gauge up to one
/// global sign flip. Requires a balanced certificate.
inline bool validate_against_gauge(const BipartitionEstimate& est, const BalanceCertificate& cert) {
    if (!cert.balanced())
        throw unbalanced_error("validate_against_gauge: certificate is not balanced");
    const auto& sigma = cert.gauge->sigma;
    if (sigma.size() != est.signs.size())
        throw parse_error("validate_against_gauge: dimension mismatch");
    bool same = true, flipped = true;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (est.signs[i] != sigma[i]) same = false;
        if (est.signs[i] != -sigma[i]) flipped = false;
    }
    return same || flipped;
}

/// Principal-branch continuous-time eigenvalue ln(mu)/dt for reporting.
inline std::complex<double> continuous_eigenvalue(std::complex<double> mu, double dt) {
    return std::log(mu) / dt;
}

}  // namespace signet
