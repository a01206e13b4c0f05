// Command-line front end: structural balance certification, automorphism
// enumeration, flow simulation, uncontrollability certificates, and EDMD
// bipartite identification, wired for reproducible runs.
//
// Exit codes: 0 ok, 2 parse error, 3 unbalanced where balance is required,
// 4 numerical failure, 5 divergence.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signet/controllability.hpp"
#include "signet/dynamics.hpp"
#include "signet/io.hpp"
#include "signet/koopman.hpp"
#include "signet/signed_graph.hpp"
#include "signet/symmetry.hpp"

namespace fs = std::filesystem;
using namespace signet;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

Eigen::VectorXd parse_vector(const std::string& csv) {
    std::vector<double> vals;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw parse_error("bad number in vector: '" + cell + "'");
        }
    }
    if (vals.empty()) throw parse_error("empty vector");
    Eigen::VectorXd x(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) x(static_cast<Eigen::Index>(i)) = vals[i];
    return x;
}

Eigen::VectorXd seeded_state(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    return x;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write: " + path);
    out << j.dump(2) << "\n";
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json(j, out_path);
}

json zero_mode_report(const EDMDResult& result, double zero_tol, double dead_zone) {
    const ZeroMode zero = extract_zero_mode(result, zero_tol);
    const BipartitionEstimate est = bipartition_from_mode(zero.mode, dead_zone);
    std::vector<double> mode(zero.mode.data(), zero.mode.data() + zero.mode.size());
    return json{{"eigenvalue", {{"re", zero.eigenvalue.real()}, {"im", zero.eigenvalue.imag()}}},
                {"continuous_eigenvalue",
                 {{"re", continuous_eigenvalue(zero.eigenvalue, result.dt).real()},
                  {"im", continuous_eigenvalue(zero.eigenvalue, result.dt).imag()}}},
                {"mode", mode},
                {"signs", est.signs},
                {"ambiguous", est.ambiguous},
                {"residual", result.residual},
                {"rank_deficient_gram", result.rank_deficient}};
}

json edmd_report(const EDMDResult& result, double zero_tol, double dead_zone, double retain) {
    json eigs = json::array();
    for (int j = 0; j < result.eigenvalues.size(); ++j) {
        if (std::abs(result.eigenvalues(j)) < retain) continue;
        eigs.push_back({{"re", result.eigenvalues(j).real()}, {"im", result.eigenvalues(j).imag()}});
    }
    json report = zero_mode_report(result, zero_tol, dead_zone);
    report["eigenvalues"] = eigs;
    return report;
}

struct PipelineConfig {
    std::string graph_path;
    std::string flow = "relative";
    std::string f_name = "sin";
    std::optional<Eigen::VectorXd> x0;
    std::uint64_t seed = 0;
    double dt = 0.1;
    double horizon = 10.0;
    std::vector<std::pair<double, double>> windows;
    int order = 2;
    double reg = 0.0;
    std::string output_dir = "signet-out";
};

PipelineConfig load_pipeline_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config: " + path);
    json j;
    try {
        in >> j;
        if (j.contains("graph")) cfg.graph_path = j["graph"].get<std::string>();
        if (j.contains("flow")) cfg.flow = j["flow"].get<std::string>();
        if (j.contains("f")) cfg.f_name = j["f"].get<std::string>();
        if (j.contains("x0")) {
            auto vals = j["x0"].get<std::vector<double>>();
            Eigen::VectorXd x(static_cast<Eigen::Index>(vals.size()));
            for (std::size_t i = 0; i < vals.size(); ++i) x(static_cast<Eigen::Index>(i)) = vals[i];
            cfg.x0 = x;
        }
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
        if (j.contains("T")) cfg.horizon = j["T"].get<double>();
        if (j.contains("order")) cfg.order = j["order"].get<int>();
        if (j.contains("reg")) cfg.reg = j["reg"].get<double>();
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("windows"))
            for (const auto& w : j["windows"])
                cfg.windows.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
    } catch (const json::exception& ex) {
        throw parse_error("config " + path + ": " + ex.what());
    }
    return cfg;
}

int run_pipeline(const PipelineConfig& cfg) {
    if (cfg.graph_path.empty()) throw parse_error("pipeline: a graph file is required");
    fs::create_directories(cfg.output_dir);
    auto out = [&](const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); };

    SignedGraph g = io::load_graph(cfg.graph_path);
    BalanceCertificate cert = check_structural_balance(g);
    write_json(io::certificate_to_json(cert), out("certificate.json"));
    if (!cert.balanced())
        throw unbalanced_error("pipeline requires a structurally balanced graph; witness cycle in " +
                               out("certificate.json"));

    FlowSystem sys{g, flow_kind_from_string(cfg.flow), builtin_nonlinearity(cfg.f_name)};
    Eigen::VectorXd x0 = cfg.x0 ? *cfg.x0 : seeded_state(cfg.seed, g.node_count());
    if (x0.size() != g.node_count()) throw parse_error("pipeline: x0 length != node count");
    Trajectory traj = integrate(sys, x0, cfg.dt, cfg.horizon);
    io::save_trajectory(traj, out("trajectory.csv"));
    if (traj.diverged) throw divergence_error("pipeline: trajectory diverged; prefix saved");

    std::vector<std::pair<double, double>> windows = cfg.windows;
    if (windows.empty()) windows = {{0.0, cfg.horizon}};
    Dictionary dict = build_dictionary(g.node_count(), cfg.order);

    json summary;
    summary["graph"] = cfg.graph_path;
    summary["flow"] = cfg.flow;
    summary["f"] = cfg.f_name;
    summary["seed"] = cfg.seed;
    summary["windows"] = json::array();
    bool all_match = true;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        auto pairs = assemble_snapshots(traj, windows[i].first, windows[i].second);
        auto result = edmd_fit(pairs, dict, cfg.reg);
        json report = edmd_report(result, 0.05, 0.1, 0.1);
        auto est = bipartition_from_mode(extract_zero_mode(result, 0.05).mode, 0.1);
        bool match = validate_against_gauge(est, cert);
        all_match = all_match && match;
        report["window"] = {windows[i].first, windows[i].second};
        report["gauge_match"] = match;
        write_json(report, out("edmd_window_" + std::to_string(i) + ".json"));
        summary["windows"].push_back(
            {{"window", {windows[i].first, windows[i].second}}, {"signs", est.signs}, {"gauge_match", match}});
    }
    summary["gauge_match"] = all_match;
    summary["sigma"] = cert.gauge->sigma;
    write_json(summary, out("summary.json"));
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed-network consensus analysis"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // balance
    auto* balance = app.add_subcommand("balance", "certify structural balance of a graph");
    std::string graph_path, out_path;
    balance->add_option("--graph", graph_path, "graph JSON file")->required();
    balance->add_option("--out", out_path, "write certificate here instead of stdout");

    // symmetry
    auto* symmetry = app.add_subcommand("symmetry", "enumerate automorphisms of |A_s|");
    std::string sym_graph, sym_out;
    std::size_t max_autos = 10000;
    bool allow_large = false;
    symmetry->add_option("--graph", sym_graph, "graph JSON file")->required();
    symmetry->add_option("--max-autos", max_autos, "bound on enumerated automorphisms");
    symmetry->add_flag("--allow-large", allow_large, "permit exhaustive search for n > 12");
    symmetry->add_option("--out", sym_out, "output file");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate a flow and emit the trajectory CSV");
    std::string sim_graph, sim_flow = "relative", sim_f = "tanh", sim_x0, sim_input, sim_out = "trajectory.csv";
    std::uint64_t sim_seed = 0;
    double sim_dt = 0.01, sim_T = 10.0;
    int sim_leader = 0;
    std::string sim_b;
    simulate->add_option("--graph", sim_graph)->required();
    simulate->add_option("--flow", sim_flow, "absolute|relative|disagreement|linear");
    simulate->add_option("--f", sim_f, "nonlinearity name");
    simulate->add_option("--x0", sim_x0, "comma-separated initial state");
    simulate->add_option("--seed", sim_seed, "seed for a random x0 when --x0 is absent");
    simulate->add_option("--dt", sim_dt);
    simulate->add_option("--T", sim_T);
    simulate->add_option("--input", sim_input, "zero|constant:c|piecewise:...|pseudorandom:s:a:h");
    simulate->add_option("--leader", sim_leader, "direct-actuation leader node");
    simulate->add_option("--b", sim_b, "additive input vector (comma-separated)");
    simulate->add_option("--out", sim_out);

    // controllability
    auto* ctrl = app.add_subcommand("controllability", "uncontrollability certificate search and probe");
    std::string ctrl_graph, ctrl_flow = "relative", ctrl_f = "tanh", ctrl_out;
    int ctrl_leader = 1;
    bool ctrl_probe = false;
    std::uint64_t ctrl_seed = 1;
    double ctrl_T = 10.0, ctrl_dt = 0.01;
    ctrl->add_option("--graph", ctrl_graph)->required();
    ctrl->add_option("--flow", ctrl_flow);
    ctrl->add_option("--f", ctrl_f);
    ctrl->add_option("--leader", ctrl_leader)->required();
    ctrl->add_flag("--probe", ctrl_probe, "run the empirical invariance probe");
    ctrl->add_option("--seed", ctrl_seed);
    ctrl->add_option("--T", ctrl_T);
    ctrl->add_option("--dt", ctrl_dt);
    ctrl->add_option("--out", ctrl_out);

    // edmd
    auto* edmd = app.add_subcommand("edmd", "fit a Koopman approximation from a trajectory CSV");
    std::string edmd_traj, edmd_window, edmd_out, edmd_modes_out;
    int edmd_order = 2;
    double edmd_reg = 0.0;
    edmd->add_option("--traj", edmd_traj, "trajectory CSV")->required();
    edmd->add_option("--window", edmd_window, "a,b time window (defaults to the full span)");
    edmd->add_option("--order", edmd_order, "max Hermite order");
    edmd->add_option("--reg", edmd_reg, "Tikhonov regularization");
    edmd->add_option("--out", edmd_out);
    edmd->add_option("--modes-out", edmd_modes_out, "optional CSV dump of all retained modes");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "graph -> balance -> simulate -> EDMD -> bipartition");
    std::string cfg_path, pl_graph, pl_flow, pl_f, pl_x0, pl_outdir;
    std::uint64_t pl_seed = 0;
    double pl_dt = 0.0, pl_T = 0.0;
    bool pl_seed_set = false;
    pipeline->add_option("--config", cfg_path, "JSON config; flags override its fields");
    pipeline->add_option("--graph", pl_graph);
    pipeline->add_option("--flow", pl_flow);
    pipeline->add_option("--f", pl_f);
    pipeline->add_option("--x0", pl_x0);
    pipeline->add_option("--seed", pl_seed)->each([&](const std::string&) { pl_seed_set = true; });
    pipeline->add_option("--dt", pl_dt);
    pipeline->add_option("--T", pl_T);
    pipeline->add_option("--output-dir", pl_outdir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*balance) {
            auto cert = check_structural_balance(io::load_graph(graph_path));
            emit(io::certificate_to_json(cert), out_path);
            if (!cert.balanced()) {
                std::cerr << "graph is structurally unbalanced\n";
                return 3;
            }
            return 0;
        }
        if (*symmetry) {
            auto g = io::load_graph(sym_graph);
            auto autos = find_automorphisms(g, max_autos, allow_large);
            emit(io::automorphisms_to_json(autos, check_structural_balance(g)), sym_out);
            return 0;
        }
        if (*simulate) {
            auto g = io::load_graph(sim_graph);
            FlowSystem sys{g, flow_kind_from_string(sim_flow), builtin_nonlinearity(sim_f)};
            if (sim_leader > 0) {
                sys.input_mode = InputMode::direct_actuation;
                sys.leader = sim_leader;
            } else if (!sim_b.empty()) {
                sys.input_mode = InputMode::additive;
                sys.input_vector = parse_vector(sim_b);
            }
            Eigen::VectorXd x0 =
                sim_x0.empty() ? seeded_state(sim_seed, g.node_count()) : parse_vector(sim_x0);
            if (x0.size() != g.node_count()) throw parse_error("x0 length != node count");
            InputSignal u = sys.input_mode == InputMode::none ? InputSignal{}
                                                             : io::parse_input_signal(sim_input);
            Trajectory traj = integrate(sys, x0, sim_dt, sim_T, u);
            io::save_trajectory(traj, sim_out);
            if (traj.diverged) throw divergence_error("trajectory diverged; prefix saved to " + sim_out);
            return 0;
        }
        if (*ctrl) {
            auto g = io::load_graph(ctrl_graph);
            auto f = builtin_nonlinearity(ctrl_f);
            auto kind = flow_kind_from_string(ctrl_flow);
            auto cert = certify_inaccessibility(g, kind, f, ctrl_leader);
            json report;
            report["certificate_found"] = cert.has_value();
            if (cert) report["certificate"] = io::uncontrollability_certificate_to_json(*cert);
            if (cert && ctrl_probe) {
                FlowSystem sys{g, kind, f, InputMode::direct_actuation, ctrl_leader};
                double dev = empirical_invariance_probe(sys, *cert, ctrl_seed, ctrl_T, ctrl_dt);
                report["probe"] = {{"seed", ctrl_seed}, {"T", ctrl_T}, {"dt", ctrl_dt},
                                   {"max_deviation", dev}};
            }
            emit(report, ctrl_out);
            return 0;
        }
        if (*edmd) {
            Trajectory traj = io::load_trajectory(edmd_traj);
            if (traj.times.empty()) throw parse_error("empty trajectory");
            double a = traj.times.front(), b = traj.times.back();
            if (!edmd_window.empty()) {
                Eigen::VectorXd w = parse_vector(edmd_window);
                if (w.size() != 2) throw parse_error("--window needs exactly a,b");
                a = w(0);
                b = w(1);
            }
            auto pairs = assemble_snapshots(traj, a, b);
            auto dict = build_dictionary(static_cast<int>(traj.states.front().size()), edmd_order);
            auto result = edmd_fit(pairs, dict, edmd_reg);
            emit(edmd_report(result, 0.05, 0.1, 0.1), edmd_out);
            if (!edmd_modes_out.empty()) {
                std::ofstream mo(edmd_modes_out);
                mo << std::setprecision(17);
                mo << "re_mu,im_mu";
                for (Eigen::Index i = 1; i <= result.modes.cols(); ++i)
                    mo << ",re_v" << i << ",im_v" << i;
                mo << "\n";
                for (int j = 0; j < result.eigenvalues.size(); ++j) {
                    if (std::abs(result.eigenvalues(j)) < 0.1) continue;
                    mo << result.eigenvalues(j).real() << "," << result.eigenvalues(j).imag();
                    for (Eigen::Index i = 0; i < result.modes.cols(); ++i)
                        mo << "," << result.modes(j, i).real() << "," << result.modes(j, i).imag();
                    mo << "\n";
                }
            }
            return 0;
        }
        if (*pipeline) {
            PipelineConfig cfg = load_pipeline_config(cfg_path);
            if (!pl_graph.empty()) cfg.graph_path = pl_graph;
            if (!pl_flow.empty()) cfg.flow = pl_flow;
            if (!pl_f.empty()) cfg.f_name = pl_f;
            if (!pl_x0.empty()) cfg.x0 = parse_vector(pl_x0);
            if (pl_seed_set) cfg.seed = pl_seed;
            if (pl_dt > 0) cfg.dt = pl_dt;
            if (pl_T > 0) cfg.horizon = pl_T;
            if (!pl_outdir.empty()) cfg.output_dir = pl_outdir;
            return run_pipeline(cfg);
        }
    } catch (const unbalanced_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const divergence_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 5;
    } catch (const numeric_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    } catch (const parse_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
