#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subedge/alias_table.hpp"
#include "subedge/degree_estimator.hpp"
#include "subedge/distribution.hpp"
#include "subedge/graph.hpp"
#include "subedge/oracle.hpp"
#include "subedge/rng.hpp"

namespace subedge {

struct SamplerConfig {
    double epsilon = 0.25; // approximation parameter, in (0, 1/2)
    double delta = 0.1;    // failure parameter, in (0, 1)
    double x = 1.0;        // trade-off parameter, >= 1
    EstimatorMode estimator = EstimatorMode::exact;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("config: epsilon must be in (0, 1/2)");
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must be in (0, 1)");
        if (!(x >= 1.0)) throw std::invalid_argument("config: x must be >= 1");
    }
};

// Output of the preprocessing phase. Immutable afterwards and safe to
// share; sampling needs only this state, an oracle and an Rng.
struct SamplerState {
    double epsilon = 0.0;
    double x_effective = 0.0;      // min(x, sqrt(n/avg_degree_est))
    double degree_threshold = 0.0; // x_effective * avg_degree_est / epsilon; heavy means degree > threshold
    double mass_ratio = 0.0;       // degree_sum / (avg_degree_est * sample size); in [1/4, 12] when accepted
    double avg_degree_est = 0.0;
    EstimatorMode estimator_mode = EstimatorMode::exact;
    std::uint32_t attempts = 0;     // number of candidate multisets allowed
    std::uint64_t sample_size = 0;  // vertices per candidate multiset
    std::vector<VertexId> sample;   // accepted multiset, with multiplicity
    std::vector<std::uint32_t> sample_degrees; // cached at preprocessing time
    std::uint64_t sample_degree_sum = 0;
    AliasTable alias; // degree-weighted over the multiset entries
    std::size_t graph_n = 0;

    bool is_heavy(std::uint32_t d) const { return static_cast<double>(d) > degree_threshold; }

    double light_accept_probability(std::uint32_t d) const {
        return static_cast<double>(d) / (degree_threshold * 4.0 * mass_ratio);
    }

    double heavy_accept_probability() const { return epsilon / (4.0 * x_effective); }

    // Per-call probability that one fixed light oriented edge is returned.
    double light_edge_probability() const {
        return 1.0 / (static_cast<double>(graph_n) * degree_threshold * 4.0 * mass_ratio);
    }
};

enum class SampleFail {
    none,
    wrong_side,   // the drawn vertex fell on the other side of the threshold
    light_reject, // light coin came up fail (or a degree-0 vertex was drawn)
    heavy_reject, // heavy coin came up fail
};

struct SampleOutcome {
    OrientedEdge edge;
    SampleFail fail = SampleFail::none;

    bool returned() const { return fail == SampleFail::none; }
};

struct PreprocessResult {
    std::optional<SamplerState> state; // empty when no candidate multiset was accepted
    DegreeEstimate estimate;
    std::uint32_t sets_drawn = 0; // candidate multisets actually drawn
};

// Builds the heavy-vertex sampling structure: estimate the average degree,
// derive the light/heavy threshold, then draw degree-weighted candidate
// multisets until one has plausible total degree mass. Cost per candidate
// is sample_size uniform-vertex plus sample_size degree queries; candidates
// are drawn lazily. An explicit empty result (not an error) means no
// candidate was accepted.
inline PreprocessResult preprocess_with_estimate(QueryOracle& oracle, const SamplerConfig& config,
                                                 const DegreeEstimate& estimate) {
    config.validate();
    if (!(estimate.avg_degree > 0.0)) throw std::invalid_argument("preprocess: average-degree estimate must be positive");

    const std::size_t n = oracle.num_vertices();
    const double d_est = estimate.avg_degree;

    SamplerState st;
    st.epsilon = config.epsilon;
    st.avg_degree_est = d_est;
    st.estimator_mode = estimate.mode;
    st.graph_n = n;
    st.x_effective = std::min(config.x, std::sqrt(static_cast<double>(n) / d_est));
    st.degree_threshold = st.x_effective * d_est / config.epsilon;
    // ceil(log3(3/delta)); the nudge keeps exact integer ratios (e.g. delta=1/3)
    // from rounding up through floating-point noise.
    st.attempts = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::ceil(std::log(3.0 / config.delta) / std::log(3.0) - 1e-12)));
    const double s_real = (static_cast<double>(n) / st.degree_threshold) * 35.0 *
                          std::log(6.0 * static_cast<double>(n) * static_cast<double>(st.attempts) / config.delta) /
                          (config.epsilon * config.epsilon);
    st.sample_size = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(s_real)));

    PreprocessResult result;
    result.estimate = estimate;

    for (std::uint32_t attempt = 0; attempt < st.attempts; ++attempt) {
        ++result.sets_drawn;
        std::vector<VertexId> candidate(st.sample_size);
        std::vector<std::uint32_t> degrees(st.sample_size);
        std::uint64_t degree_sum = 0;
        for (std::uint64_t i = 0; i < st.sample_size; ++i) {
            candidate[i] = oracle.uniform_vertex();
            degrees[i] = oracle.degree(candidate[i]);
            degree_sum += degrees[i];
        }
        // Acceptance is phrased on the mass ratio itself so that the stored
        // value and the accepted range agree bit for bit.
        const double ratio =
            static_cast<double>(degree_sum) / (d_est * static_cast<double>(st.sample_size));
        if (ratio >= 0.25 && ratio <= 12.0) {
            st.mass_ratio = ratio;
            st.sample = std::move(candidate);
            st.sample_degrees = std::move(degrees);
            st.sample_degree_sum = degree_sum;
            std::vector<double> weights(st.sample_degrees.begin(), st.sample_degrees.end());
            st.alias = AliasTable::build(weights);
            result.state = std::move(st);
            return result;
        }
    }
    return result; // no candidate accepted
}

inline PreprocessResult preprocess(QueryOracle& oracle, const SamplerConfig& config, Rng& rng) {
    config.validate();
    const DegreeEstimate est =
        estimate_avg_degree(oracle, config.estimator, config.epsilon, config.delta / 3.0, rng);
    return preprocess_with_estimate(oracle, config, est);
}

// One light-side attempt: uniform vertex, keep only if light, then a
// uniform neighbor and an acceptance coin of d/(threshold * 4 * mass_ratio).
// At most 3 oracle queries (1 vertex + 1 degree + 1 neighbor).
inline SampleOutcome sample_light(QueryOracle& oracle, const SamplerState& state, Rng& rng) {
    const VertexId v = oracle.uniform_vertex();
    const std::uint32_t d = oracle.degree(v);
    if (state.is_heavy(d)) return {OrientedEdge{}, SampleFail::wrong_side};
    if (d == 0) return {OrientedEdge{}, SampleFail::light_reject};
    const VertexId u = *oracle.neighbor(v, static_cast<std::uint32_t>(rng.below(d)));
    if (rng.next_double() < state.light_accept_probability(d)) {
        return {OrientedEdge{v, u}, SampleFail::none};
    }
    return {OrientedEdge{}, SampleFail::light_reject};
}

// One heavy-side attempt: degree-weighted multiset entry (no oracle cost,
// degree cached), a uniform neighbor, keep only if heavy, a uniform
// neighbor of that, then an acceptance coin of epsilon/(4*x_effective).
// At most 3 oracle queries (2 neighbor + 1 degree).
inline SampleOutcome sample_heavy(QueryOracle& oracle, const SamplerState& state, Rng& rng) {
    const std::uint32_t idx = state.alias.sample(rng);
    const VertexId v = state.sample[idx];
    const std::uint32_t dv = state.sample_degrees[idx];
    const VertexId u = *oracle.neighbor(v, static_cast<std::uint32_t>(rng.below(dv)));
    const std::uint32_t du = oracle.degree(u);
    if (!state.is_heavy(du)) return {OrientedEdge{}, SampleFail::wrong_side};
    const VertexId w = *oracle.neighbor(u, static_cast<std::uint32_t>(rng.below(du)));
    if (rng.next_double() < state.heavy_accept_probability()) {
        return {OrientedEdge{u, w}, SampleFail::none};
    }
    return {OrientedEdge{}, SampleFail::heavy_reject};
}

struct DrawResult {
    OrientedEdge edge;
    std::uint64_t iterations = 0; // light/heavy attempts consumed by this draw
};

inline std::uint64_t iteration_cap(const SamplerState& state) {
    return static_cast<std::uint64_t>(std::ceil((192.0 * state.x_effective / state.epsilon) * 64.0));
}

// Fair coin between the light and heavy procedures until one returns an
// edge. Terminates with probability 1 under a good state; the cap turns a
// silently bad state into a diagnosable error.
inline DrawResult sample_edge(QueryOracle& oracle, const SamplerState& state, Rng& rng) {
    const std::uint64_t cap = iteration_cap(state);
    for (std::uint64_t it = 1; it <= cap; ++it) {
        const SampleOutcome out =
            rng.next_bit() ? sample_heavy(oracle, state, rng) : sample_light(oracle, state, rng);
        if (out.returned()) return {out.edge, it};
    }
    throw std::runtime_error("sample_edge exceeded its iteration cap; the preprocessing state looks bad");
}

// Closed-form conditional output distribution of sample_edge for a fixed
// state: light edges carry one shared mass, each heavy edge carries mass
// proportional to how often the multiset reaches its source vertex.
// Harness-side: reads the whole graph and never touches an oracle.
inline EdgeDistribution exact_distribution(const Graph& graph, const SamplerState& state) {
    if (graph.num_vertices() != state.graph_n) throw std::invalid_argument("exact_distribution: state/graph mismatch");

    std::vector<std::uint32_t> multiplicity(graph.num_vertices(), 0);
    for (VertexId v : state.sample) ++multiplicity[v];

    EdgeDistribution dist;
    dist.kind = DistributionKind::exact;
    dist.mass.assign(graph.num_oriented_edges(), 0.0);

    const double light_unit = state.light_edge_probability();
    const double heavy_coin = state.heavy_accept_probability();
    const double ms = static_cast<double>(state.sample_degree_sum);

    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
        const std::uint32_t d = graph.degree(v);
        if (d == 0) continue;
        double per_edge = 0.0;
        if (!state.is_heavy(d)) {
            per_edge = light_unit;
        } else {
            std::uint64_t d_s = 0;
            for (VertexId w : graph.neighbors(v)) d_s += multiplicity[w];
            per_edge = (static_cast<double>(d_s) / (ms * static_cast<double>(d))) * heavy_coin;
        }
        const std::uint64_t base = graph.vertex_offset(v);
        for (std::uint32_t i = 0; i < d; ++i) dist.mass[base + i] = per_edge;
    }

    long double total = 0.0L;
    for (double p : dist.mass) total += p;
    if (total <= 0.0L) throw std::runtime_error("exact_distribution: state assigns zero mass to every edge");
    for (double& p : dist.mass) p = static_cast<double>(p / total);
    return dist;
}

} // namespace subedge
