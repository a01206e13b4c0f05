#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "signet/example_graphs.hpp"
#include "signet/io.hpp"
#include "test_helpers.hpp"

using namespace signet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("signet-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("graph files round-trip") {
    TempDir tmp;
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = test::random_connected_graph(rng, 3 + static_cast<int>(rng() % 8));
        auto path = tmp.file("g.json");
        io::save_graph(g, path);
        auto g2 = io::load_graph(path);
        REQUIRE(g2.node_count() == g.node_count());
        REQUIRE(g2.edges().size() == g.edges().size());
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            CHECK(g2.edges()[i].u == g.edges()[i].u);
            CHECK(g2.edges()[i].v == g.edges()[i].v);
            CHECK(g2.edges()[i].w == g.edges()[i].w);
        }
    }
}

TEST_CASE("graph file errors are parse errors") {
    TempDir tmp;
    CHECK_THROWS_AS(io::load_graph(tmp.file("missing.json")), parse_error);
    auto bad = tmp.file("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(io::load_graph(bad), parse_error);
    auto wrong = tmp.file("wrong.json");
    std::ofstream(wrong) << R"({"n": 2, "edges": [{"u": 1}]})";
    CHECK_THROWS_AS(io::load_graph(wrong), parse_error);
}

TEST_CASE("certificate serialization") {
    auto balanced = io::certificate_to_json(check_structural_balance(examples::balanced_four()));
    CHECK(balanced["status"] == "balanced");
    CHECK(balanced["sigma"] == std::vector<int>{1, 1, -1, 1});
    auto unbalanced = io::certificate_to_json(check_structural_balance(examples::unbalanced_four()));
    CHECK(unbalanced["status"] == "unbalanced");
    CHECK(unbalanced["witness_cycle"].size() >= 3);
}

TEST_CASE("trajectory CSV round-trip") {
    TempDir tmp;
    FlowSystem sys{examples::balanced_four(), FlowKind::relative, builtin_nonlinearity("tanh")};
    Eigen::VectorXd x0(4);
    x0 << 0.3, -1.2, 0.8, -0.1;
    auto traj = integrate(sys, x0, 0.1, 2.0);
    auto path = tmp.file("traj.csv");
    io::save_trajectory(traj, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1,x2,x3,x4");

    auto loaded = io::load_trajectory(path);
    REQUIRE(loaded.times.size() == traj.times.size());
    CHECK(loaded.dt == Catch::Approx(traj.dt));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        CHECK(loaded.times[k] == traj.times[k]);  // exact: full precision emitted
        CHECK((loaded.states[k] - traj.states[k]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("input signal specs") {
    CHECK(io::parse_input_signal("zero")(1.0) == 0.0);
    CHECK(io::parse_input_signal("constant:2.5")(3.0) == 2.5);
    auto pw = io::parse_input_signal("piecewise:0:1,1.5:-2");
    CHECK(pw(0.5) == 1.0);
    CHECK(pw(2.0) == -2.0);
    auto pr = io::parse_input_signal("pseudorandom:7:1:0.5");
    CHECK(pr(0.2) == pseudorandom_input(7, 1.0, 0.5)(0.2));
    CHECK_THROWS_AS(io::parse_input_signal("sawtooth:1"), parse_error);
    CHECK_THROWS_AS(io::parse_input_signal("constant:xyz"), parse_error);
}
