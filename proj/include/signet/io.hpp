#pragma once

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signet/controllability.hpp"
#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/koopman.hpp"
#include "signet/signed_graph.hpp"
#include "signet/symmetry.hpp"

namespace signet::io {

using nlohmann::json;

inline json graph_to_json(const SignedGraph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
    return json{{"n", g.node_count()}, {"edges", edges}};
}

inline SignedGraph graph_from_json(const json& j) {
    try {
        int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), e.at("w").get<double>()});
        return SignedGraph(n, std::move(edges));
    } catch (const json::exception& ex) {
        throw parse_error(std::string("graph file: ") + ex.what());
    }
}

inline SignedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open graph file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw parse_error("graph file " + path + ": " + ex.what());
    }
    return graph_from_json(j);
}

inline void save_graph(const SignedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write graph file: " + path);
    out << graph_to_json(g).dump(2) << "\n";
}

inline json certificate_to_json(const BalanceCertificate& cert) {
    json j;
    j["status"] = cert.balanced() ? "balanced" : "unbalanced";
    if (cert.balanced()) {
        j["sigma"] = cert.gauge->sigma;
        j["partition"] = {{"positive", cert.positive_part}, {"negative", cert.negative_part}};
    } else {
        j["witness_cycle"] = cert.witness_cycle;
    }
    j["component"] = cert.component;
    return j;
}

inline json automorphisms_to_json(const std::vector<Permutation>& autos,
                                  const BalanceCertificate& cert) {
    json list = json::array();
    for (const Permutation& p : autos) list.push_back(p.map);
    json j{{"count", autos.size()}, {"permutations", list}};
    if (cert.balanced()) j["gauge"] = cert.gauge->sigma;
    return j;
}

/// CSV with header t,x1,...,xn, one row per sample, full double precision.
inline void save_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write trajectory file: " + path);
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    const auto n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << traj.times[k];
        for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.states[k](i);
        out << "\n";
    }
}

inline Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("trajectory file is empty: " + path);
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw parse_error("trajectory file " + path + ": bad number '" + cell + "'");
            }
        }
        if (row.size() < 2) throw parse_error("trajectory file " + path + ": short row");
        traj.times.push_back(row[0]);
        Eigen::VectorXd x(static_cast<Eigen::Index>(row.size()) - 1);
        for (std::size_t i = 1; i < row.size(); ++i) x(static_cast<Eigen::Index>(i - 1)) = row[i];
        traj.states.push_back(std::move(x));
    }
    if (traj.times.size() >= 2) traj.dt = traj.times[1] - traj.times[0];
    return traj;
}

inline json rank_report_to_json(const RankReport& r) {
    std::vector<double> sv(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
    return json{{"rank", r.matrix_rank},
                {"dimension", r.dimension},
                {"singular_values", sv},
                {"verdict", r.verdict == ControllabilityVerdict::controllable ? "controllable"
                                                                              : "uncontrollable"}};
}

inline json uncontrollability_certificate_to_json(const UncontrollabilityCertificate& c) {
    return json{{"theorem", to_string(c.theorem)},
                {"leader", c.leader},
                {"permutation", c.automorphism.perm.map},
                {"gauge", c.gauge.sigma},
                {"parity_case", c.parity_case == Parity::odd ? "odd" : "even"},
                {"edge_sign_preserved", c.edge_sign_preserved}};
}

/// Input-signal spec: "zero", "constant:c", "piecewise:t0:v0,t1:v1,...",
/// "pseudorandom:seed:amplitude:hold".
inline InputSignal parse_input_signal(const std::string& spec) {
    if (spec.empty() || spec == "zero") return zero_input();
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string p;
        while (std::getline(ss, p, sep)) parts.push_back(p);
        return parts;
    };
    try {
        if (spec.rfind("constant:", 0) == 0) return constant_input(std::stod(spec.substr(9)));
        if (spec.rfind("piecewise:", 0) == 0) {
            std::vector<std::pair<double, double>> sched;
            for (const std::string& seg : split(spec.substr(10), ',')) {
                auto kv = split(seg, ':');
                if (kv.size() != 2) throw parse_error("bad piecewise segment: " + seg);
                sched.emplace_back(std::stod(kv[0]), std::stod(kv[1]));
            }
            return piecewise_input(std::move(sched));
        }
        if (spec.rfind("pseudorandom:", 0) == 0) {
            auto parts = split(spec.substr(13), ':');
            if (parts.size() != 3) throw parse_error("pseudorandom needs seed:amplitude:hold");
            return pseudorandom_input(std::stoull(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
        }
    } catch (const std::invalid_argument&) {
        throw parse_error("bad number in input spec: " + spec);
    }
    throw parse_error("unknown input signal spec: " + spec);
}

}  // namespace signet::io
