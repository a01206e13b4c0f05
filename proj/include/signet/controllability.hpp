#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/signed_graph.hpp"
#include "signet/symmetry.hpp"

namespace signet {

/// Kalman controllability matrix [b, Ab, A^2 b, ..., A^{n-1} b].
inline Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw parse_error("controllability_matrix: dimension mismatch");
    const auto n = A.rows();
    Eigen::MatrixXd C(n, n);
    Eigen::VectorXd col = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        C.col(k) = col;
        col = A * col;
    }
    return C;
}

enum class ControllabilityVerdict { controllable, uncontrollable };

struct RankReport {
    int matrix_rank = 0;
    int dimension = 0;
    Eigen::VectorXd singular_values;
    ControllabilityVerdict verdict = ControllabilityVerdict::uncontrollable;
};

/// Numerical rank: count of singular values above rel_tol * s_max.
inline RankReport rank_with_tolerance(const Eigen::MatrixXd& M, double rel_tol = 1e-10) {
    if (rel_tol <= 0 || rel_tol >= 1) throw parse_error("rank_with_tolerance: rel_tol must be in (0,1)");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    if (svd.info() != Eigen::Success) throw numeric_error("rank_with_tolerance: SVD failed");
    RankReport report;
    report.dimension = static_cast<int>(std::min(M.rows(), M.cols()));
    report.singular_values = svd.singularValues();
    double smax = report.singular_values.size() > 0 ? report.singular_values(0) : 0.0;
    for (Eigen::Index i = 0; i < report.singular_values.size(); ++i)
        if (report.singular_values(i) > rel_tol * smax) ++report.matrix_rank;
    report.verdict = report.matrix_rank == report.dimension ? ControllabilityVerdict::controllable
                                                            : ControllabilityVerdict::uncontrollable;
    return report;
}

enum class TheoremTag { T4, T5, T6 };

inline std::string to_string(TheoremTag t) {
    switch (t) {
        case TheoremTag::T4: return "T4";
        case TheoremTag::T5: return "T5";
        default: return "T6";
    }
}

/// Sufficient-condition certificate of inaccessibility from the origin:
/// structural balance + a non-identity signed automorphism fixing the
/// leader + the parity condition of the matching theorem. Absence of a
/// certificate makes no controllability claim.
struct UncontrollabilityCertificate {
    TheoremTag theorem = TheoremTag::T4;
    int leader = 0;
    SignedAutomorphism automorphism;
    GaugeTransform gauge;
    Parity parity_case = Parity::odd;
    bool edge_sign_preserved = false;  // meaningful only for the T4 even case
};

/// Searches for an inaccessibility certificate for the given leader.
/// Accepts: absolute flow with odd f; absolute flow with even f only when
/// the automorphism preserves edge signs; relative/disagreement flows with
/// odd or even f. Rejects parity "neither".
inline std::optional<UncontrollabilityCertificate> certify_inaccessibility(
    const SignedGraph& g, FlowKind kind, const NonlinearFunction& f, int leader,
    std::size_t auto_limit = 10000) {
    if (kind == FlowKind::linear)
        throw parse_error("certify_inaccessibility: kind must be one of the nonlinear flows");
    if (f.parity == Parity::neither)
        throw parse_error("certify_inaccessibility: f must have odd or even parity");
    if (leader < 1 || leader > g.node_count())
        throw parse_error("certify_inaccessibility: leader out of range");

    BalanceCertificate balance = check_structural_balance(g);
    if (!balance.balanced()) return std::nullopt;
    const GaugeTransform& gauge = *balance.gauge;

    for (const Permutation& perm : find_automorphisms(g, auto_limit)) {
        if (perm.is_identity()) continue;
        if (perm.of(leader) != leader) continue;
        bool sign_preserved = preserves_edge_signs(g, perm);
        TheoremTag tag;
        if (kind == FlowKind::absolute) {
            if (f.parity == Parity::even && !sign_preserved) continue;
            tag = TheoremTag::T4;
        } else {
            tag = kind == FlowKind::relative ? TheoremTag::T5 : TheoremTag::T6;
        }
        UncontrollabilityCertificate cert{tag, leader, make_signed_automorphism(perm, gauge),
                                          gauge, f.parity, sign_preserved};
        return cert;
    }
    return std::nullopt;
}

/// Drives the leader with seeded piecewise-constant noise from x0 = 0 and
/// reports max_t ||phi'(x(t)) - x(t)||_inf. A valid certificate keeps the
/// trajectory inside Fix(phi'), so the deviation stays at integration
/// noise level.
inline double empirical_invariance_probe(const FlowSystem& sys,
                                         const UncontrollabilityCertificate& cert,
                                         std::uint64_t seed, double T, double dt) {
    if (sys.input_mode != InputMode::direct_actuation || sys.leader != cert.leader)
        throw parse_error("empirical_invariance_probe: system must directly actuate the certificate leader");
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.graph.node_count());
    InputSignal u = pseudorandom_input(seed, 1.0, 0.5);
    Trajectory traj = integrate(sys, x0, dt, T, u);
    if (traj.diverged)
        throw divergence_error("empirical_invariance_probe: trajectory diverged");
    double worst = 0.0;
    for (const Eigen::VectorXd& x : traj.states)
        worst = std::max(worst, (cert.automorphism.apply(x) - x).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace signet
