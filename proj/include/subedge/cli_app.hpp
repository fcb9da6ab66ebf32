#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subedge/edge_sampler.hpp"
#include "subedge/generators.hpp"
#include "subedge/graph.hpp"
#include "subedge/harness.hpp"
#include "subedge/serialize.hpp"

namespace subedge {
namespace cli {

// Exit codes: 0 pass, 1 algorithmic fail (preprocessing or criteria), 2 usage/IO.
constexpr int exit_ok = 0;
constexpr int exit_algorithmic = 1;
constexpr int exit_usage = 2;

// File and argument problems exit with 2; algorithmic failures with 1.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SUBEDGE_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

inline std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw IoError("cannot open output file: " + path);
    return file;
}

inline Graph load_graph_file(const std::string& path) {
    try {
        return load_graph(path);
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

inline SamplerState load_state_file(const std::string& path, const Graph& g) {
    try {
        return load_state(path, g);
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

inline Graph load_input_graph(const std::string& graph_path, const std::string& gen_spec, std::uint64_t seed) {
    if (!graph_path.empty()) return load_graph_file(graph_path);
    if (!gen_spec.empty()) return generate_graph(gen_spec, seed);
    throw IoError("either --graph or --gen is required");
}

inline std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline std::vector<std::uint64_t> parse_grid(const std::string& grid) {
    std::vector<std::uint64_t> qs;
    std::stringstream ss(grid);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) qs.push_back(std::stoull(tok));
    }
    if (qs.empty()) throw std::runtime_error("empty --q-grid");
    return qs;
}

} // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"subedge: amortized near-uniform edge sampling over adjacency-list query access"};
    app.require_subcommand(1);
    app.fallthrough(); // let --seed appear after the subcommand name

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "base seed (falls back to SUBEDGE_SEED, then 1)")->capture_default_str();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a graph and write it as an edge list");
    std::string gen_spec_g;
    std::string out_g;
    gen_cmd->add_option("--gen", gen_spec_g, "generator spec, e.g. star:101 or erdos_renyi:500,0.02")->required();
    gen_cmd->add_option("--out", out_g, "output file (default stdout)");

    // preprocess
    auto* pre_cmd = app.add_subcommand("preprocess", "build and persist a sampler state");
    std::string graph_p, out_p, estimator_p = "exact";
    double eps_p = 0.25, delta_p = 0.1, x_p = 1.0;
    unsigned retries_p = 0;
    pre_cmd->add_option("--graph", graph_p, "edge-list file")->required();
    pre_cmd->add_option("--eps", eps_p, "approximation parameter in (0, 1/2)")->capture_default_str();
    pre_cmd->add_option("--delta", delta_p, "failure parameter in (0, 1)")->capture_default_str();
    pre_cmd->add_option("--x", x_p, "trade-off parameter >= 1")->capture_default_str();
    pre_cmd->add_option("--retries", retries_p, "re-run preprocessing with fresh seeds on fail")->capture_default_str();
    pre_cmd->add_option("--estimator", estimator_p, "exact|sublinear")->check(CLI::IsMember({"exact", "sublinear"}));
    pre_cmd->add_option("--out", out_p, "state file (default stdout)");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw edges using a persisted state");
    std::string graph_s, state_s, out_s;
    std::uint64_t q_s = 1;
    bool fold_s = false;
    sample_cmd->add_option("--graph", graph_s, "edge-list file")->required();
    sample_cmd->add_option("--state", state_s, "state file from preprocess")->required();
    sample_cmd->add_option("--q", q_s, "number of edges to draw")->required();
    sample_cmd->add_flag("--fold", fold_s, "print unordered edges (u <= v) instead of oriented ones");
    sample_cmd->add_option("--out", out_s, "output file (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "preprocess repeatedly and check the distribution guarantees");
    std::string graph_v, gen_v, out_v, format_v = "csv", estimator_v = "exact";
    double eps_v = 0.25, delta_v = 0.1, x_v = 1.0;
    unsigned seeds_v = 20;
    std::uint64_t q_v = 0;
    verify_cmd->add_option("--graph", graph_v, "edge-list file");
    verify_cmd->add_option("--gen", gen_v, "generator spec instead of a file");
    verify_cmd->add_option("--eps", eps_v)->capture_default_str();
    verify_cmd->add_option("--delta", delta_v)->capture_default_str();
    verify_cmd->add_option("--x", x_v)->capture_default_str();
    verify_cmd->add_option("--seeds", seeds_v, "number of seeded runs")->capture_default_str();
    verify_cmd->add_option("--q", q_v, "empirical samples per run (0 = analytic only)")->capture_default_str();
    verify_cmd->add_option("--estimator", estimator_v)->check(CLI::IsMember({"exact", "sublinear"}));
    verify_cmd->add_option("--out", out_v, "report file (default stdout)");
    verify_cmd->add_option("--format", format_v)->check(CLI::IsMember({"csv", "json"}));

    // scale
    auto* scale_cmd = app.add_subcommand("scale", "measure total queries against the sample budget q");
    std::string graph_c, gen_c, out_c, format_c = "csv", grid_c = "100,400,1600,6400";
    double eps_c = 0.25, delta_c = 0.1, factor_lo = 1.5, factor_hi = 2.8;
    unsigned seeds_c = 11;
    bool no_factor_check = false;
    scale_cmd->add_option("--graph", graph_c, "edge-list file");
    scale_cmd->add_option("--gen", gen_c, "generator spec instead of a file");
    scale_cmd->add_option("--eps", eps_c)->capture_default_str();
    scale_cmd->add_option("--delta", delta_c)->capture_default_str();
    scale_cmd->add_option("--q-grid", grid_c, "comma-separated q values")->capture_default_str();
    scale_cmd->add_option("--seeds", seeds_c, "seeded runs per q")->capture_default_str();
    scale_cmd->add_option("--factor-lo", factor_lo, "lower bound for per-step growth factors")->capture_default_str();
    scale_cmd->add_option("--factor-hi", factor_hi, "upper bound for per-step growth factors")->capture_default_str();
    scale_cmd->add_flag("--no-factor-check", no_factor_check, "report only; do not gate the exit code");
    scale_cmd->add_option("--out", out_c, "report file (default stdout)");
    scale_cmd->add_option("--format", format_c)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) ? exit_usage : exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const std::uint64_t seed = detail::resolve_seed(seed_flag);

        if (gen_cmd->parsed()) {
            const Graph g = generate_graph(gen_spec_g, seed);
            std::ofstream file;
            std::ostream& out = detail::open_out(file, out_g);
            save_graph(g, out);
            return exit_ok;
        }

        if (pre_cmd->parsed()) {
            const Graph g = detail::load_graph_file(graph_p);
            SamplerConfig config;
            config.epsilon = eps_p;
            config.delta = delta_p;
            config.x = x_p;
            config.estimator = estimator_p == "exact" ? EstimatorMode::exact : EstimatorMode::sublinear;

            for (unsigned attempt = 0; attempt <= retries_p; ++attempt) {
                const std::uint64_t run_seed = seed + attempt;
                QueryOracle oracle(g, substream_seed(run_seed, "oracle"));
                Rng estimator_rng(substream_seed(run_seed, "estimator"));
                const DegreeEstimate est =
                    estimate_avg_degree(oracle, config.estimator, config.epsilon, config.delta / 3.0, estimator_rng);
                const QueryCounters after_estimator = oracle.counters();
                const PreprocessResult pre = preprocess_with_estimate(oracle, config, est);
                const QueryCounters search = oracle.counters() - after_estimator;

                json report;
                report["seed"] = run_seed;
                report["estimator"] = {{"mode", est.mode == EstimatorMode::exact ? "exact" : "sublinear"},
                                       {"avg_degree", est.avg_degree},
                                       {"queries", est.queries_used}};
                report["sets_drawn"] = pre.sets_drawn;
                report["search_queries"] = {{"uniform_vertex", search.uniform_vertex},
                                            {"degree", search.degree},
                                            {"neighbor", search.neighbor}};
                report["total_queries"] = oracle.counters().total();
                if (pre.state) {
                    report["t"] = pre.state->attempts;
                    report["s"] = pre.state->sample_size;
                    report["x_bar"] = pre.state->x_effective;
                    report["tau"] = pre.state->degree_threshold;
                    report["gamma_bar"] = pre.state->mass_ratio;
                    report["degree_sum"] = pre.state->sample_degree_sum;
                    report["ok"] = true;
                    std::ofstream file;
                    std::ostream& out = detail::open_out(file, out_p);
                    out << state_to_json(*pre.state, g).dump(2) << "\n";
                    std::cout << report.dump(2) << "\n";
                    return exit_ok;
                }
                report["t"] = static_cast<std::uint32_t>(
                    std::ceil(std::log(3.0 / config.delta) / std::log(3.0)));
                report["ok"] = false;
                std::cerr << report.dump(2) << "\n";
            }
            std::cerr << "preprocess failed: no candidate multiset accepted "
                      << "(cause: no S_i accepted; re-run with --retries or a new --seed)\n";
            return exit_algorithmic;
        }

        if (sample_cmd->parsed()) {
            const Graph g = detail::load_graph_file(graph_s);
            const SamplerState state = detail::load_state_file(state_s, g);
            QueryOracle oracle(g, substream_seed(seed, "oracle"));
            Rng rng(substream_seed(seed, "sampling"));

            std::ofstream file;
            std::ostream& out = detail::open_out(file, out_s);
            std::uint64_t iterations = 0;
            for (std::uint64_t i = 0; i < q_s; ++i) {
                const DrawResult draw = sample_edge(oracle, state, rng);
                iterations += draw.iterations;
                VertexId a = draw.edge.source, b = draw.edge.target;
                if (fold_s && a > b) std::swap(a, b);
                out << a << " " << b << "\n";
            }
            json summary;
            summary["samples"] = q_s;
            summary["iterations"] = iterations;
            summary["mean_iterations"] = static_cast<double>(iterations) / static_cast<double>(q_s);
            summary["queries"] = {{"uniform_vertex", oracle.counters().uniform_vertex},
                                  {"degree", oracle.counters().degree},
                                  {"neighbor", oracle.counters().neighbor},
                                  {"total", oracle.counters().total()}};
            out << "# " << summary.dump() << "\n";
            return exit_ok;
        }

        if (verify_cmd->parsed()) {
            const Graph g = detail::load_input_graph(graph_v, gen_v, seed);
            const std::string name = !gen_v.empty() ? gen_v : graph_v;
            SamplerConfig config;
            config.epsilon = eps_v;
            config.delta = delta_v;
            config.x = x_v;
            config.estimator = estimator_v == "exact" ? EstimatorMode::exact : EstimatorMode::sublinear;

            std::vector<VerifyRow> rows;
            unsigned bad_states = 0;
            bool all_pass = true;
            for (unsigned i = 0; i < seeds_v; ++i) {
                VerifyRow row = verify_run(g, name, config, seed + i, q_v);
                if (!row.preprocess_ok || !row.good_set) ++bad_states;
                all_pass = all_pass && row.pass;
                rows.push_back(std::move(row));
            }
            const double allowance = static_cast<double>(seeds_v) * delta_v +
                                     3.0 * std::sqrt(static_cast<double>(seeds_v) * delta_v * (1.0 - delta_v));
            const bool budget_ok = static_cast<double>(bad_states) <= allowance;

            std::ofstream file;
            std::ostream& out = detail::open_out(file, out_v);
            if (format_v == "csv") {
                out << VerifyRow::csv_header() << "\n";
                for (const VerifyRow& r : rows) out << verify_row_to_csv(r) << "\n";
            } else {
                json j;
                j["timestamp"] = detail::timestamp();
                j["graph"] = name;
                j["rows"] = json::array();
                for (const VerifyRow& r : rows) j["rows"].push_back(verify_row_to_json(r));
                j["bad_states"] = bad_states;
                j["bad_state_allowance"] = allowance;
                j["pass"] = all_pass && budget_ok;
                out << j.dump(2) << "\n";
            }
            std::cerr << "verify: " << rows.size() << " runs, " << bad_states << " non-good states (allowance "
                      << allowance << "), " << (all_pass && budget_ok ? "PASS" : "FAIL") << "\n";
            return all_pass && budget_ok ? exit_ok : exit_algorithmic;
        }

        if (scale_cmd->parsed()) {
            const Graph g = detail::load_input_graph(graph_c, gen_c, seed);
            const std::vector<std::uint64_t> grid = detail::parse_grid(grid_c);
            std::vector<std::uint64_t> seeds;
            for (unsigned i = 0; i < seeds_c; ++i) seeds.push_back(seed + i);
            const ScalingReport report = scaling_experiment(g, eps_c, delta_c, grid, seeds);

            std::ofstream file;
            std::ostream& out = detail::open_out(file, out_c);
            if (format_c == "csv") {
                out << scaling_cell_csv_header() << "\n";
                for (const ScalingCell& c : report.cells) out << scaling_cell_to_csv(c) << "\n";
            } else {
                json j = scaling_report_to_json(report);
                j["timestamp"] = detail::timestamp();
                out << j.dump(2) << "\n";
            }

            bool factors_ok = true;
            for (double f : report.step_factors) factors_ok = factors_ok && f >= factor_lo && f <= factor_hi;
            std::cerr << "scale: step factors";
            for (double f : report.step_factors) std::cerr << " " << f;
            std::cerr << ", sqrt-fit correlation " << report.sqrt_fit_correlation << "\n";
            if (no_factor_check) return exit_ok;
            return factors_ok ? exit_ok : exit_algorithmic;
        }

        return exit_usage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_algorithmic;
    }
}

} // namespace cli
} // namespace subedge
