#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "subedge/distribution.hpp"
#include "subedge/edge_sampler.hpp"
#include "subedge/generators.hpp"
#include "subedge/graph.hpp"
#include "subedge/oracle.hpp"
#include "subedge/rng.hpp"
#include "subedge/stats.hpp"

namespace subedge {

// Brute-force verdict on a sampled multiset: does every heavy vertex see
// the multiset at close to its expected rate, and does the multiset carry
// a plausible share of total degree mass? Reads the whole graph; never
// touches an oracle. The estimate band is reported alongside because the
// sampler's guarantees condition on both.
struct GoodSetReport {
    bool heavy_concentration_ok = true; // every heavy vertex within (1 +- eps) of expectation
    bool mass_ratio_ok = true;          // degree mass per element within [1/4, 12] of true average degree
    bool estimate_ok = true;            // estimate within [(1-eps) d_avg, d_avg]
    std::uint64_t heavy_vertices = 0;
    VertexId worst_vertex = 0;
    double worst_relative_deviation = 0.0; // max over heavy v of |d_S(v)/E - 1|
    double mass_per_element = 0.0;         // m(S)/s
    double true_avg_degree = 0.0;

    bool good() const { return heavy_concentration_ok && mass_ratio_ok; }
};

inline GoodSetReport check_good_set(const Graph& graph, const std::vector<VertexId>& multiset, double eps,
                                    double degree_threshold, double avg_degree_estimate) {
    GoodSetReport rep;
    const std::size_t n = graph.num_vertices();
    const double s = static_cast<double>(multiset.size());

    std::vector<std::uint32_t> multiplicity(n, 0);
    std::uint64_t degree_sum = 0;
    for (VertexId v : multiset) {
        ++multiplicity[v];
        degree_sum += graph.degree(v);
    }
    rep.mass_per_element = static_cast<double>(degree_sum) / s;
    rep.true_avg_degree = graph.avg_degree();
    rep.mass_ratio_ok = rep.mass_per_element >= 0.25 * rep.true_avg_degree &&
                        rep.mass_per_element <= 12.0 * rep.true_avg_degree;
    rep.estimate_ok = avg_degree_estimate >= (1.0 - eps) * rep.true_avg_degree &&
                      avg_degree_estimate <= rep.true_avg_degree;

    for (VertexId v = 0; v < n; ++v) {
        const std::uint32_t d = graph.degree(v);
        if (static_cast<double>(d) <= degree_threshold) continue;
        ++rep.heavy_vertices;
        std::uint64_t d_s = 0;
        for (VertexId w : graph.neighbors(v)) d_s += multiplicity[w];
        const double expectation = s * static_cast<double>(d) / static_cast<double>(n);
        const double rel = std::fabs(static_cast<double>(d_s) - expectation) / expectation;
        if (rel > rep.worst_relative_deviation) {
            rep.worst_relative_deviation = rel;
            rep.worst_vertex = v;
        }
        if (rel > eps) rep.heavy_concentration_ok = false;
    }
    return rep;
}

struct EmpiricalResult {
    EdgeDistribution distribution;
    std::uint64_t total_iterations = 0;
    double mean_iterations = 0.0;
    QueryCounters queries; // consumed by the sampling calls alone
};

// Draws num_samples edges through the metered oracle and normalizes the
// counts. The graph is used only to index edges for counting.
inline EmpiricalResult empirical_distribution(const Graph& graph, QueryOracle& oracle, const SamplerState& state,
                                              Rng& rng, std::uint64_t num_samples) {
    if (num_samples == 0) throw std::invalid_argument("empirical_distribution: need at least one sample");
    if (graph.num_vertices() != state.graph_n) throw std::invalid_argument("empirical_distribution: state/graph mismatch");

    std::unordered_map<std::uint64_t, std::uint64_t> index_of;
    index_of.reserve(graph.num_oriented_edges() * 2);
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
        const auto& nb = graph.neighbors(v);
        for (std::uint32_t i = 0; i < nb.size(); ++i) {
            index_of[(static_cast<std::uint64_t>(v) << 32) | nb[i]] = graph.edge_index(v, i);
        }
    }

    std::vector<std::uint64_t> counts(graph.num_oriented_edges(), 0);
    EmpiricalResult result;
    const QueryCounters before = oracle.counters();
    for (std::uint64_t i = 0; i < num_samples; ++i) {
        const DrawResult draw = sample_edge(oracle, state, rng);
        result.total_iterations += draw.iterations;
        const std::uint64_t key = (static_cast<std::uint64_t>(draw.edge.source) << 32) | draw.edge.target;
        ++counts[index_of.at(key)];
    }
    result.queries = oracle.counters() - before;
    result.mean_iterations = static_cast<double>(result.total_iterations) / static_cast<double>(num_samples);

    result.distribution.kind = DistributionKind::empirical;
    result.distribution.sample_count = num_samples;
    result.distribution.mass.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        result.distribution.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(num_samples);
    }
    return result;
}

// One verification run: preprocess, judge the state, and when the state is
// good compare the analytic output distribution against uniform. Optionally
// also draw samples to measure the empirical side.
struct VerifyRow {
    std::string graph_name;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double eps = 0.0;
    double delta = 0.0;
    double x = 0.0;
    bool preprocess_ok = false;
    double x_bar = 0.0;
    double tau = 0.0;
    double gamma_bar = 0.0;
    std::uint32_t t = 0;
    std::uint64_t s = 0;
    std::uint64_t preprocess_queries = 0;
    bool good_set = false;
    bool estimate_ok = false;
    std::uint64_t samples = 0;
    std::uint64_t sample_queries = 0;
    double mean_iterations = 0.0;
    double pointwise_dev = 0.0;
    double tvd_value = 0.0;
    double max_min_ratio = 0.0;
    bool pass = false;

    static std::string csv_header() {
        return "graph,seed,n,m,eps,delta,x,x_bar,tau,gamma_bar,t,s,preprocess_queries,good_set,"
               "estimate_ok,samples,sample_queries,mean_iterations,pointwise_dev,tvd,max_min_ratio,pass";
    }
};

inline VerifyRow verify_run(const Graph& graph, const std::string& graph_name, const SamplerConfig& config,
                            std::uint64_t seed, std::uint64_t num_samples = 0) {
    VerifyRow row;
    row.graph_name = graph_name;
    row.seed = seed;
    row.n = graph.num_vertices();
    row.m = graph.num_oriented_edges();
    row.eps = config.epsilon;
    row.delta = config.delta;
    row.x = config.x;

    QueryOracle oracle(graph, substream_seed(seed, "oracle"));
    Rng estimator_rng(substream_seed(seed, "estimator"));
    const PreprocessResult pre = preprocess(oracle, config, estimator_rng);
    row.preprocess_queries = oracle.counters().total();
    if (!pre.state) return row; // preprocess_ok stays false

    const SamplerState& st = *pre.state;
    row.preprocess_ok = true;
    row.x_bar = st.x_effective;
    row.tau = st.degree_threshold;
    row.gamma_bar = st.mass_ratio;
    row.t = st.attempts;
    row.s = st.sample_size;

    const GoodSetReport good = check_good_set(graph, st.sample, st.epsilon, st.degree_threshold, st.avg_degree_est);
    row.good_set = good.good();
    row.estimate_ok = good.estimate_ok;

    const EdgeDistribution exact = exact_distribution(graph, st);
    const EdgeDistribution uniform = uniform_distribution(graph);
    row.pointwise_dev = pointwise_deviation(exact, uniform);
    row.tvd_value = tvd(exact, uniform);
    const auto [mn, mx] = std::minmax_element(exact.mass.begin(), exact.mass.end());
    row.max_min_ratio = *mn > 0.0 ? *mx / *mn : INFINITY;

    if (num_samples > 0) {
        Rng sample_rng(substream_seed(seed, "sampling"));
        const EmpiricalResult emp = empirical_distribution(graph, oracle, st, sample_rng, num_samples);
        row.samples = num_samples;
        row.sample_queries = emp.queries.total();
        row.mean_iterations = emp.mean_iterations;
    }

    // A good state must deliver the pointwise guarantee; a state that is
    // not good only counts against the failure budget.
    row.pass = !row.good_set || (row.pointwise_dev <= 2.0 * config.epsilon && row.gamma_bar >= 0.25 &&
                                 row.gamma_bar <= 12.0);
    return row;
}

// Amortization measurement: for each requested sample count q, set the
// trade-off to (n/sqrt(m))/sqrt(q) (clamped to >= 1, the config domain),
// preprocess, draw q samples, and record total queries. When the clamp is
// inactive both phases scale like sqrt(q).
struct ScalingCell {
    std::uint64_t q = 0;
    std::uint64_t seed = 0;
    double x = 0.0;
    double x_bar = 0.0;
    std::uint64_t preprocess_queries = 0;
    std::uint64_t sample_queries = 0;
    std::uint64_t total_queries = 0;
    double mean_iterations = 0.0;
};

struct ScalingReport {
    std::vector<ScalingCell> cells;
    std::vector<std::uint64_t> q_grid;
    std::vector<double> median_total; // aligned with q_grid
    std::vector<double> step_factors; // median ratios between consecutive q
    double sqrt_fit_correlation = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double nd = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= nd;
    my /= nd;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace detail

inline ScalingReport scaling_experiment(const Graph& graph, double eps, double delta,
                                        const std::vector<std::uint64_t>& q_grid,
                                        const std::vector<std::uint64_t>& seeds,
                                        EstimatorMode estimator = EstimatorMode::exact) {
    ScalingReport report;
    report.q_grid = q_grid;
    const double n = static_cast<double>(graph.num_vertices());
    const double m = static_cast<double>(graph.num_oriented_edges());

    for (std::uint64_t q : q_grid) {
        std::vector<double> totals;
        for (std::uint64_t seed : seeds) {
            SamplerConfig config;
            config.epsilon = eps;
            config.delta = delta;
            config.x = std::max(1.0, (n / std::sqrt(m)) / std::sqrt(static_cast<double>(q)));
            config.estimator = estimator;

            ScalingCell cell;
            cell.q = q;
            cell.seed = seed;
            cell.x = config.x;

            QueryOracle oracle(graph, substream_seed(seed, "oracle"));
            Rng estimator_rng(substream_seed(seed, "estimator"));
            // A failed candidate search is retried with a fresh stream; its
            // queries stay in the bill.
            std::optional<SamplerState> state;
            for (std::uint64_t retry = 0; !state; ++retry) {
                Rng retry_rng(substream_seed(seed + 1000003 * retry, "estimator/retry"));
                PreprocessResult pre = preprocess(oracle, config, retry == 0 ? estimator_rng : retry_rng);
                state = std::move(pre.state);
                if (retry > 64) throw std::runtime_error("scaling_experiment: preprocessing keeps failing");
            }
            cell.x_bar = state->x_effective;
            cell.preprocess_queries = oracle.counters().total();

            Rng sample_rng(substream_seed(seed, "sampling"));
            const QueryCounters before = oracle.counters();
            std::uint64_t iterations = 0;
            for (std::uint64_t i = 0; i < q; ++i) {
                iterations += sample_edge(oracle, *state, sample_rng).iterations;
            }
            cell.sample_queries = (oracle.counters() - before).total();
            cell.total_queries = cell.preprocess_queries + cell.sample_queries;
            cell.mean_iterations = static_cast<double>(iterations) / static_cast<double>(q);

            totals.push_back(static_cast<double>(cell.total_queries));
            report.cells.push_back(cell);
        }
        report.median_total.push_back(detail::median(totals));
    }

    for (std::size_t i = 1; i < report.median_total.size(); ++i) {
        report.step_factors.push_back(report.median_total[i] / report.median_total[i - 1]);
    }

    std::vector<double> xs, ys;
    for (const ScalingCell& c : report.cells) {
        xs.push_back(std::sqrt(static_cast<double>(c.q)));
        ys.push_back(static_cast<double>(c.total_queries));
    }
    report.sqrt_fit_correlation = detail::pearson(xs, ys);
    return report;
}

} // namespace subedge
