#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "subedge/edge_sampler.hpp"
#include "subedge/graph.hpp"
#include "subedge/harness.hpp"

namespace subedge {

using json = nlohmann::ordered_json;

inline std::string checksum_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// Versioned persistence of a preprocessing result. The alias table is
// rebuilt from the multiset and its cached degrees on load, and the state
// is pinned to one graph via (n, checksum).
inline json state_to_json(const SamplerState& state, const Graph& graph) {
    json j;
    j["format"] = "subedge-state";
    j["version"] = 1;
    j["graph"]["n"] = graph.num_vertices();
    j["graph"]["checksum"] = checksum_hex(graph.checksum());
    j["epsilon"] = state.epsilon;
    j["x_bar"] = state.x_effective;
    j["tau"] = state.degree_threshold;
    j["gamma_bar"] = state.mass_ratio;
    j["avg_degree_estimate"] = state.avg_degree_est;
    j["estimator_mode"] = state.estimator_mode == EstimatorMode::exact ? "exact" : "sublinear";
    j["attempts"] = state.attempts;
    j["sample_size"] = state.sample_size;
    j["degree_sum"] = state.sample_degree_sum;
    j["sample"] = state.sample;
    j["degrees"] = state.sample_degrees;
    return j;
}

inline SamplerState state_from_json(const json& j, const Graph& graph) {
    if (j.value("format", "") != "subedge-state") throw std::runtime_error("not a subedge state file");
    if (j.value("version", 0) != 1) throw std::runtime_error("unsupported state version");
    if (j.at("graph").at("n").get<std::size_t>() != graph.num_vertices() ||
        j.at("graph").at("checksum").get<std::string>() != checksum_hex(graph.checksum())) {
        throw std::runtime_error("state does not match this graph (n/checksum mismatch)");
    }

    SamplerState st;
    st.epsilon = j.at("epsilon").get<double>();
    st.x_effective = j.at("x_bar").get<double>();
    st.degree_threshold = j.at("tau").get<double>();
    st.mass_ratio = j.at("gamma_bar").get<double>();
    st.avg_degree_est = j.at("avg_degree_estimate").get<double>();
    st.estimator_mode =
        j.at("estimator_mode").get<std::string>() == "exact" ? EstimatorMode::exact : EstimatorMode::sublinear;
    st.attempts = j.at("attempts").get<std::uint32_t>();
    st.sample_size = j.at("sample_size").get<std::uint64_t>();
    st.sample_degree_sum = j.at("degree_sum").get<std::uint64_t>();
    st.sample = j.at("sample").get<std::vector<VertexId>>();
    st.sample_degrees = j.at("degrees").get<std::vector<std::uint32_t>>();
    st.graph_n = graph.num_vertices();

    if (st.sample.size() != st.sample_size || st.sample_degrees.size() != st.sample_size) {
        throw std::runtime_error("state file is inconsistent: multiset size mismatch");
    }
    std::uint64_t sum = 0;
    for (std::uint32_t d : st.sample_degrees) sum += d;
    if (sum != st.sample_degree_sum) throw std::runtime_error("state file is inconsistent: degree sum mismatch");
    const double recomputed =
        static_cast<double>(sum) / (st.avg_degree_est * static_cast<double>(st.sample_size));
    if (std::fabs(recomputed - st.mass_ratio) > 1e-9 * std::max(1.0, std::fabs(st.mass_ratio))) {
        throw std::runtime_error("state file is inconsistent: mass ratio mismatch");
    }

    std::vector<double> weights(st.sample_degrees.begin(), st.sample_degrees.end());
    st.alias = AliasTable::build(weights);
    return st;
}

inline void save_state(const SamplerState& state, const Graph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << state_to_json(state, graph).dump(2) << "\n";
}

inline SamplerState load_state(const std::string& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    json j;
    in >> j;
    return state_from_json(j, graph);
}

inline json verify_row_to_json(const VerifyRow& row) {
    json j;
    j["graph"] = row.graph_name;
    j["seed"] = row.seed;
    j["n"] = row.n;
    j["m"] = row.m;
    j["eps"] = row.eps;
    j["delta"] = row.delta;
    j["x"] = row.x;
    j["preprocess_ok"] = row.preprocess_ok;
    j["x_bar"] = row.x_bar;
    j["tau"] = row.tau;
    j["gamma_bar"] = row.gamma_bar;
    j["t"] = row.t;
    j["s"] = row.s;
    j["preprocess_queries"] = row.preprocess_queries;
    j["good_set"] = row.good_set;
    j["estimate_ok"] = row.estimate_ok;
    j["samples"] = row.samples;
    j["sample_queries"] = row.sample_queries;
    j["mean_iterations"] = row.mean_iterations;
    j["pointwise_dev"] = row.pointwise_dev;
    j["tvd"] = row.tvd_value;
    j["max_min_ratio"] = row.max_min_ratio;
    j["pass"] = row.pass;
    return j;
}

inline std::string verify_row_to_csv(const VerifyRow& row) {
    std::ostringstream os;
    os << row.graph_name << ',' << row.seed << ',' << row.n << ',' << row.m << ',' << row.eps << ','
       << row.delta << ',' << row.x << ',' << row.x_bar << ',' << row.tau << ',' << row.gamma_bar << ','
       << row.t << ',' << row.s << ',' << row.preprocess_queries << ',' << (row.good_set ? 1 : 0) << ','
       << (row.estimate_ok ? 1 : 0) << ',' << row.samples << ',' << row.sample_queries << ','
       << row.mean_iterations << ',' << row.pointwise_dev << ',' << row.tvd_value << ','
       << row.max_min_ratio << ',' << (row.pass ? 1 : 0);
    return os.str();
}

inline json scaling_report_to_json(const ScalingReport& report) {
    json j;
    j["q_grid"] = report.q_grid;
    j["median_total_queries"] = report.median_total;
    j["step_factors"] = report.step_factors;
    j["sqrt_fit_correlation"] = report.sqrt_fit_correlation;
    j["cells"] = json::array();
    for (const ScalingCell& c : report.cells) {
        json cj;
        cj["q"] = c.q;
        cj["seed"] = c.seed;
        cj["x"] = c.x;
        cj["x_bar"] = c.x_bar;
        cj["preprocess_queries"] = c.preprocess_queries;
        cj["sample_queries"] = c.sample_queries;
        cj["total_queries"] = c.total_queries;
        cj["mean_iterations"] = c.mean_iterations;
        j["cells"].push_back(cj);
    }
    return j;
}

inline std::string scaling_cell_csv_header() {
    return "q,seed,x,x_bar,preprocess_queries,sample_queries,total_queries,mean_iterations";
}

inline std::string scaling_cell_to_csv(const ScalingCell& c) {
    std::ostringstream os;
    os << c.q << ',' << c.seed << ',' << c.x << ',' << c.x_bar << ',' << c.preprocess_queries << ','
       << c.sample_queries << ',' << c.total_queries << ',' << c.mean_iterations;
    return os.str();
}

} // namespace subedge
