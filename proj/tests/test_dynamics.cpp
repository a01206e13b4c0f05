#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "signet/dynamics.hpp"
#include "signet/example_graphs.hpp"
#include "test_helpers.hpp"

using namespace signet;

namespace {

FlowSystem make_system(const SignedGraph& g, FlowKind kind, const std::string& fname) {
    return FlowSystem{g, kind, builtin_nonlinearity(fname)};
}

Eigen::VectorXd random_state(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    return x;
}

}  // namespace

TEST_CASE("nonlinearity registry metadata holds on samples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> span(-10.0, 10.0);
    for (const char* name : {"identity", "cubic", "tanh", "sin", "square", "abs"}) {
        auto f = builtin_nonlinearity(name);
        for (int k = 0; k < 200; ++k) {
            double x = span(rng);
            if (f.parity == Parity::odd) CHECK(f(-x) == Catch::Approx(-f(x)).margin(1e-12));
            if (f.parity == Parity::even) CHECK(f(-x) == Catch::Approx(f(x)).margin(1e-12));
            if (f.sector == SectorClass::S0) {
                double y = span(rng);
                if (std::abs(x - y) > 1e-9) CHECK((f(x) - f(y)) * (x - y) > 0.0);
                if (std::abs(x) > 1e-9) CHECK(f(x) * x > 0.0);
            }
        }
    }
    CHECK_THROWS_AS(builtin_nonlinearity("nope"), parse_error);
}

TEST_CASE("flow_field") {
    auto g = examples::balanced_four();
    SECTION("origin is an equilibrium for every kind") {
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
        for (auto kind : {FlowKind::absolute, FlowKind::relative, FlowKind::disagreement, FlowKind::linear})
            CHECK(flow_field(make_system(g, kind, "cubic"), zero).norm() == 0.0);
    }
    SECTION("relative flow with identity f equals -L_s x on unit-weight graphs") {
        std::mt19937_64 rng(23);
        auto sys = make_system(g, FlowKind::relative, "identity");
        Eigen::MatrixXd ls = signed_laplacian(g);
        for (int k = 0; k < 20; ++k) {
            Eigen::VectorXd x = random_state(rng, 4);
            CHECK((flow_field(sys, x) + ls * x).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("bipartite agreement states are equilibria of the relative flow") {
        auto cert = check_structural_balance(g);
        Eigen::VectorXd x = cert.gauge->apply(Eigen::VectorXd::Ones(4));
        auto sys = make_system(g, FlowKind::relative, "tanh");
        CHECK(flow_field(sys, x).norm() == 0.0);
        CHECK(flow_field(make_system(g, FlowKind::disagreement, "tanh"), 2.5 * x).norm() == 0.0);
    }
    SECTION("non-finite states are rejected") {
        Eigen::VectorXd bad = Eigen::VectorXd::Constant(4, std::nan(""));
        CHECK_THROWS_AS(flow_field(make_system(g, FlowKind::linear, "identity"), bad), parse_error);
    }
    SECTION("gauge equivalence: signed flow in G_t coordinates is the unsigned flow") {
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 20; ++trial) {
            auto base = test::random_connected_graph(rng, 3 + static_cast<int>(rng() % 6));
            std::vector<int> sigma(static_cast<std::size_t>(base.node_count()));
            for (int& s : sigma) s = rng() % 2 ? 1 : -1;
            auto g_signed = test::with_gauge_signs(base, sigma);
            std::vector<Edge> unsigned_edges;
            for (const Edge& e : g_signed.edges()) unsigned_edges.push_back({e.u, e.v, std::abs(e.w)});
            SignedGraph g_unsigned(g_signed.node_count(), unsigned_edges);
            GaugeTransform gauge(sigma);
            for (auto kind : {FlowKind::absolute, FlowKind::relative}) {
                auto sys_s = make_system(g_signed, kind, "cubic");
                auto sys_u = make_system(g_unsigned, kind, "cubic");
                Eigen::VectorXd x = random_state(rng, g_signed.node_count());
                Eigen::VectorXd lhs = gauge.apply(flow_field(sys_s, x));
                Eigen::VectorXd rhs = flow_field(sys_u, gauge.apply(x));
                CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("controlled_field") {
    auto g = examples::balanced_four();
    SECTION("direct actuation replaces the leader derivative") {
        auto sys = make_system(g, FlowKind::relative, "tanh");
        sys.input_mode = InputMode::direct_actuation;
        sys.leader = 2;
        std::mt19937_64 rng(31);
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x = random_state(rng, 4);
            double u = random_state(rng, 1)(0);
            Eigen::VectorXd dx = controlled_field(sys, x, u);
            CHECK(dx(1) == u);
            Eigen::VectorXd open = flow_field(sys, x);
            CHECK(dx(0) == open(0));
            CHECK(dx(2) == open(2));
        }
        CHECK(controlled_field(sys, Eigen::VectorXd::Zero(4), 0.0).norm() == 0.0);
    }
    SECTION("additive mode adds b*u to the open-loop field") {
        SignedGraph g3(3, {{1, 2, 1.0}, {2, 3, -1.0}});
        auto sys = make_system(g3, FlowKind::linear, "identity");
        sys.input_mode = InputMode::additive;
        sys.input_vector = Eigen::VectorXd(3);
        sys.input_vector << 1, 1, -1;
        Eigen::VectorXd dx = controlled_field(sys, Eigen::VectorXd::Zero(3), 1.0);
        CHECK(dx(0) == 1.0);
        CHECK(dx(1) == 1.0);
        CHECK(dx(2) == -1.0);
    }
    SECTION("missing input configuration throws") {
        auto sys = make_system(g, FlowKind::linear, "identity");
        CHECK_THROWS_AS(controlled_field(sys, Eigen::VectorXd::Zero(4), 1.0), parse_error);
    }
}

TEST_CASE("integrate") {
    SECTION("linear consensus on an unsigned graph converges to the average") {
        SignedGraph g(4, {{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {1, 4, 1.0}});
        auto sys = make_system(g, FlowKind::linear, "identity");
        Eigen::VectorXd x0(4);
        x0 << 1.0, -2.0, 0.5, 3.0;
        auto traj = integrate(sys, x0, 0.01, 20.0);
        REQUIRE(!traj.diverged);
        double avg = x0.mean();
        CHECK((traj.states.back() - Eigen::VectorXd::Constant(4, avg)).cwiseAbs().maxCoeff() < 1e-6);
    }
    SECTION("RK4 order: halving dt cuts the error ~16x against expm") {
        auto g = examples::balanced_four();
        auto sys = make_system(g, FlowKind::linear, "identity");
        Eigen::MatrixXd ls = signed_laplacian(g);
        Eigen::VectorXd x0(4);
        x0 << 1.0, -0.5, 0.25, 2.0;
        double T = 1.0;
        Eigen::VectorXd exact = (-T * ls).exp() * x0;
        double err1 = (integrate(sys, x0, 0.1, T).states.back() - exact).norm();
        double err2 = (integrate(sys, x0, 0.05, T).states.back() - exact).norm();
        CHECK(err1 / err2 > 12.0);
        CHECK(err1 / err2 < 20.0);
    }
    SECTION("dt = T produces exactly two samples") {
        auto sys = make_system(examples::balanced_four(), FlowKind::linear, "identity");
        auto traj = integrate(sys, Eigen::VectorXd::Ones(4), 0.5, 0.5);
        CHECK(traj.times.size() == 2);
        CHECK(traj.times[1] == Catch::Approx(0.5));
    }
    SECTION("uniform spacing invariant") {
        auto sys = make_system(examples::balanced_four(), FlowKind::relative, "tanh");
        auto traj = integrate(sys, Eigen::VectorXd::Ones(4), 0.1, 2.0);
        for (std::size_t k = 1; k < traj.times.size(); ++k)
            CHECK(std::abs(traj.times[k] - traj.times[k - 1] - traj.dt) <= 1e-12);
    }
    SECTION("divergence aborts with a marked partial trajectory") {
        // A stiff cubic with dt = 0.1 makes RK4 blow up past the guard.
        SignedGraph g(2, {{1, 2, 1.0}});
        auto sys = make_system(g, FlowKind::relative, "cubic");
        Eigen::VectorXd x0(2);
        x0 << 50.0, -50.0;
        auto traj = integrate(sys, x0, 0.1, 50.0);
        CHECK(traj.diverged);
        CHECK(traj.times.size() < 501);
    }
    CHECK_THROWS_AS(integrate(make_system(examples::balanced_four(), FlowKind::linear, "identity"),
                              Eigen::VectorXd::Zero(4), -0.1, 1.0),
                    parse_error);
}

TEST_CASE("bipartite_limit") {
    auto g = examples::balanced_four();
    SECTION("zero start stays zero") {
        CHECK(bipartite_limit(g, Eigen::VectorXd::Zero(4)).norm() == 0.0);
    }
    SECTION("unsigned graph reduces to the consensus mean") {
        SignedGraph u(3, {{1, 2, 1.0}, {2, 3, 1.0}});
        Eigen::VectorXd x0(3);
        x0 << 1.0, 2.0, 6.0;
        CHECK((bipartite_limit(u, x0) - Eigen::VectorXd::Constant(3, 3.0)).norm() < 1e-14);
    }
    SECTION("worked 4-node value") {
        Eigen::VectorXd x0 = Eigen::VectorXd::Ones(4);
        Eigen::VectorXd want(4);
        want << 0.5, 0.5, -0.5, 0.5;
        CHECK((bipartite_limit(g, x0) - want).norm() < 1e-14);
    }
    SECTION("long simulation of the absolute flow matches the predicted limit") {
        auto sys = make_system(g, FlowKind::absolute, "cubic");
        Eigen::VectorXd x0(4);
        x0 << 0.8, -0.3, 0.5, 0.1;
        auto traj = integrate(sys, x0, 0.01, 100.0);
        REQUIRE(!traj.diverged);
        CHECK((traj.states.back() - bipartite_limit(g, x0)).cwiseAbs().maxCoeff() < 1e-3);
    }
    SECTION("unbalanced graphs are rejected") {
        CHECK_THROWS_AS(bipartite_limit(examples::unbalanced_four(), Eigen::VectorXd::Ones(4)),
                        unbalanced_error);
    }
}

TEST_CASE("input signals") {
    SECTION("pseudorandom input is deterministic and respects the hold time") {
        auto u1 = pseudorandom_input(7, 1.0, 0.5);
        auto u2 = pseudorandom_input(7, 1.0, 0.5);
        CHECK(u1(0.3) == u2(0.3));
        CHECK(u1(0.1) == u1(0.4));   // same hold segment
        CHECK(u1(0.1) != u1(0.6));   // next segment
        CHECK(std::abs(u1(3.7)) <= 1.0);
    }
    SECTION("piecewise schedule") {
        auto u = piecewise_input({{0.0, 1.0}, {2.0, -3.0}});
        CHECK(u(0.5) == 1.0);
        CHECK(u(2.5) == -3.0);
    }
}
