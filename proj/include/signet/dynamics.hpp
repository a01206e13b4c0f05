#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "signet/errors.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

enum class Parity { odd, even, neither };
enum class SectorClass { S, S0, none };

/// Scalar nonlinearity with parity/sector metadata. Sector membership is
/// registry metadata, property-tested on samples rather than proven.
struct NonlinearFunction {
    std::string name;
    Parity parity = Parity::neither;
    SectorClass sector = SectorClass::none;
    std::function<double(double)> eval;
    bool smooth = true;

    double operator()(double x) const { return eval(x); }
};

/// Builtin registry. Throws parse_error for unknown names.
inline NonlinearFunction builtin_nonlinearity(const std::string& name) {
    if (name == "identity")
        return {"identity", Parity::odd, SectorClass::S0, [](double x) { return x; }, true};
    if (name == "cubic" || name == "cubic_plus_linear")
        return {"cubic", Parity::odd, SectorClass::S0, [](double x) { return x * x * x + x; }, true};
    if (name == "tanh")
        return {"tanh", Parity::odd, SectorClass::S0, [](double x) { return std::tanh(x); }, true};
    if (name == "sin")
        return {"sin", Parity::odd, SectorClass::none, [](double x) { return std::sin(x); }, true};
    if (name == "square")
        return {"square", Parity::even, SectorClass::none, [](double x) { return x * x; }, true};
    if (name == "abs")
        return {"abs", Parity::even, SectorClass::none, [](double x) { return std::abs(x); }, false};
    throw parse_error("unknown nonlinearity: " + name);
}

enum class FlowKind { absolute, relative, disagreement, linear };

inline FlowKind flow_kind_from_string(const std::string& s) {
    if (s == "absolute") return FlowKind::absolute;
    if (s == "relative") return FlowKind::relative;
    if (s == "disagreement") return FlowKind::disagreement;
    if (s == "linear") return FlowKind::linear;
    throw parse_error("unknown flow kind: " + s);
}

inline std::string to_string(FlowKind k) {
    switch (k) {
        case FlowKind::absolute: return "absolute";
        case FlowKind::relative: return "relative";
        case FlowKind::disagreement: return "disagreement";
        default: return "linear";
    }
}

enum class InputMode { none, direct_actuation, additive };

/// Graph + flow kind + nonlinearity + optional control wiring.
struct FlowSystem {
    SignedGraph graph;
    FlowKind kind = FlowKind::linear;
    NonlinearFunction f;  // ignored for the linear kind
    InputMode input_mode = InputMode::none;
    int leader = 0;                    // direct-actuation leader node (1-indexed)
    Eigen::VectorXd input_vector;      // b for the additive mode

    void validate() const {
        const int n = graph.node_count();
        if (input_mode == InputMode::direct_actuation && (leader < 1 || leader > n))
            throw parse_error("FlowSystem: leader node out of range");
        if (input_mode == InputMode::additive && input_vector.size() != n)
            throw parse_error("FlowSystem: input vector length != node count");
    }
};

/// Uncontrolled vector field of the configured flow.
inline Eigen::VectorXd flow_field(const FlowSystem& sys, const Eigen::VectorXd& x) {
    const SignedGraph& g = sys.graph;
    const int n = g.node_count();
    if (x.size() != n) throw parse_error("flow_field: state dimension mismatch");
    if (!x.allFinite()) throw parse_error("flow_field: non-finite state");

    if (sys.kind == FlowKind::linear) return -(signed_laplacian(g) * x);

    const auto& f = sys.f;
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        switch (sys.kind) {
            case FlowKind::absolute:
                for (const auto& [j, w] : g.neighbors(i)) acc += f(x(i - 1)) - sgn(w) * f(x(j - 1));
                break;
            case FlowKind::relative:
                for (const auto& [j, w] : g.neighbors(i)) acc += f(x(i - 1) - sgn(w) * x(j - 1));
                break;
            case FlowKind::disagreement: {
                double s = 0.0;
                for (const auto& [j, w] : g.neighbors(i)) s += x(i - 1) - sgn(w) * x(j - 1);
                acc = f(s);
                break;
            }
            default: break;
        }
        dx(i - 1) = -acc;
    }
    return dx;
}

/// Controlled field. Direct actuation replaces the leader's derivative
/// with u; additive mode adds b*u to the open-loop field.
inline Eigen::VectorXd controlled_field(const FlowSystem& sys, const Eigen::VectorXd& x, double u,
                                        double /*t*/ = 0.0) {
    sys.validate();
    if (sys.input_mode == InputMode::none)
        throw parse_error("controlled_field: no input configured");
    Eigen::VectorXd dx = flow_field(sys, x);
    if (sys.input_mode == InputMode::direct_actuation)
        dx(sys.leader - 1) = u;
    else
        dx += sys.input_vector * u;
    return dx;
}

/// Uniformly sampled trajectory. `diverged` marks a run aborted by the
/// overflow guard; the stored prefix is still valid.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    double dt = 0.0;
    bool diverged = false;
};

using InputSignal = std::function<double(double)>;

inline InputSignal zero_input() {
    return [](double) { return 0.0; };
}

inline InputSignal constant_input(double c) {
    return [c](double) { return c; };
}

/// Piecewise-constant schedule: value of the last breakpoint at or before t.
inline InputSignal piecewise_input(std::vector<std::pair<double, double>> schedule) {
    return [schedule = std::move(schedule)](double t) {
        double u = 0.0;
        for (const auto& [start, val] : schedule)
            if (t >= start) u = val;
        return u;
    };
}

/// Seeded piecewise-constant noise: a fresh uniform draw in
/// [-amplitude, amplitude] every hold_time units.
inline InputSignal pseudorandom_input(std::uint64_t seed, double amplitude, double hold_time) {
    if (hold_time <= 0) throw parse_error("pseudorandom_input: hold_time must be > 0");
    return [=](double t) {
        auto segment = static_cast<std::uint64_t>(std::floor(t / hold_time + 1e-12));
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + segment + 1);
        std::uniform_real_distribution<double> dist(-amplitude, amplitude);
        return dist(rng);
    };
}

constexpr double kOverflowGuard = 1e12;

/// Classic fixed-step RK4 over [0, T]. Samples at t = 0, dt, 2dt, ...;
/// the input signal is optional (open-loop flow when absent).
inline Trajectory integrate(const FlowSystem& sys, const Eigen::VectorXd& x0, double dt, double T,
                            const InputSignal& u = nullptr) {
    if (dt <= 0) throw parse_error("integrate: dt must be > 0");
    if (T < dt) throw parse_error("integrate: horizon must be >= dt");
    auto field = [&](const Eigen::VectorXd& x, double t) {
        return u ? controlled_field(sys, x, u(t), t) : flow_field(sys, x);
    };
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    Trajectory traj;
    traj.dt = dt;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    Eigen::VectorXd x = x0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (std::size_t k = 0; k < steps; ++k) {
        double t = static_cast<double>(k) * dt;
        Eigen::VectorXd k1 = field(x, t);
        Eigen::VectorXd k2 = field(x + 0.5 * dt * k1, t + 0.5 * dt);
        Eigen::VectorXd k3 = field(x + 0.5 * dt * k2, t + 0.5 * dt);
        Eigen::VectorXd k4 = field(x + dt * k3, t + dt);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kOverflowGuard) {
            traj.diverged = true;
            return traj;
        }
        traj.times.push_back(static_cast<double>(k + 1) * dt);
        traj.states.push_back(x);
    }
    return traj;
}

/// Bipartite consensus limit (1/n)(1^T G_t x0) G_t 1 for a structurally
/// balanced graph. Throws unbalanced_error otherwise.
inline Eigen::VectorXd bipartite_limit(const SignedGraph& g, const Eigen::VectorXd& x0) {
    if (x0.size() != g.node_count()) throw parse_error("bipartite_limit: dimension mismatch");
    BalanceCertificate cert = check_structural_balance(g);
    if (!cert.balanced())
        throw unbalanced_error("bipartite_limit: graph is not structurally balanced");
    const GaugeTransform& gauge = *cert.gauge;
    double alpha = gauge.apply(x0).sum() / g.node_count();
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.node_count());
    return alpha * gauge.apply(ones);
}

}  // namespace signet
