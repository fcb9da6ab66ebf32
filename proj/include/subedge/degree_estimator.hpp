#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subedge/oracle.hpp"
#include "subedge/rng.hpp"

namespace subedge {

enum class EstimatorMode { exact, sublinear };

struct DegreeEstimate {
    // Estimate of the average degree m/n (oriented m). The sublinear mode
    // targets the one-sided band [(1-eps)*d_avg, d_avg] with probability
    // at least 1-delta; exact mode is m/n itself.
    double avg_degree = 0.0;
    std::uint64_t queries_used = 0;
    EstimatorMode mode = EstimatorMode::exact;
};

// d_avg = m/n via n degree queries. Baseline and fallback.
inline DegreeEstimate estimate_avg_degree_exact(QueryOracle& oracle) {
    const std::size_t n = oracle.num_vertices();
    const std::uint64_t before = oracle.counters().total();
    std::uint64_t sum = 0;
    for (VertexId v = 0; v < n; ++v) sum += oracle.degree(v);
    if (sum == 0) throw std::runtime_error("graph has no edges; average degree undefined for sampling");
    return {static_cast<double>(sum) / static_cast<double>(n), oracle.counters().total() - before,
            EstimatorMode::exact};
}

namespace detail {

// Geometric degree buckets ((1+beta)^(i-1), (1+beta)^i]. Bucket ids start
// at 0 for degree 1; degree-0 vertices carry no edge mass and sit outside.
struct DegreeBuckets {
    std::vector<double> upper; // upper[i] = (1+beta)^i, covers degrees up to n-1

    DegreeBuckets(std::size_t n, double beta) {
        long double hi = 1.0L;
        upper.push_back(static_cast<double>(hi));
        while (hi < static_cast<long double>(n)) {
            hi *= (1.0L + static_cast<long double>(beta));
            upper.push_back(static_cast<double>(hi));
        }
    }

    std::size_t count() const { return upper.size(); }

    std::size_t of_degree(std::uint32_t d) const {
        auto it = std::lower_bound(upper.begin(), upper.end(), static_cast<double>(d));
        return static_cast<std::size_t>(it - upper.begin());
    }

    double lower_edge(std::size_t i) const { return i == 0 ? 0.0 : upper[i - 1]; }
};

} // namespace detail

// Average-degree estimation from vertex, degree and neighbor queries,
// sublinear on dense graphs. Structure: sample uniform vertices, group them
// into geometric degree buckets (beta = eps/8), keep buckets that are both
// populated in the sample and below a degree cap, and for each kept sample
// draw one random neighbor to credit edges that lead into dropped buckets
// (such an edge is counted twice from its kept endpoint, standing in for
// the missing reverse orientation). Only edges with both endpoints in
// dropped buckets are lost, and the cap/threshold pair bounds that loss.
// The two-sided concentration of the credited sum is turned into the
// one-sided contract by dividing by (1+eps/3).
//
// The guess for m starts at the maximum possible value and halves per
// round; a round is accepted when its estimate is consistent with the
// guess. When a round would need order-n queries the estimator falls back
// to the exact scan (the returned mode says so); a hard budget of 64n
// queries turns pathological inputs (e.g. empty graphs) into errors.
inline DegreeEstimate estimate_avg_degree_sublinear(QueryOracle& oracle, double eps, double delta, Rng& rng) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("estimator needs eps in (0, 1/2)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("estimator needs delta in (0, 1)");

    const std::size_t n = oracle.num_vertices();
    const std::uint64_t before = oracle.counters().total();
    const std::uint64_t budget = 64ULL * static_cast<std::uint64_t>(n);
    const double two_sided = eps / 3.0;
    const double loss = eps / 4.0;
    const double beta = eps / 8.0;

    auto used = [&]() { return oracle.counters().total() - before; };
    auto exact_fallback = [&]() -> DegreeEstimate {
        std::uint64_t sum = 0;
        for (VertexId v = 0; v < n; ++v) sum += oracle.degree(v);
        if (sum == 0) throw std::runtime_error("graph has no edges; average degree undefined for sampling");
        return {static_cast<double>(sum) / static_cast<double>(n), used(), EstimatorMode::exact};
    };
    if (n < 16) return exact_fallback();

    const detail::DegreeBuckets buckets(n, beta);
    const std::size_t nbuckets = buckets.count();

    double m_guess = static_cast<double>(n) * static_cast<double>(n - 1);
    for (int round = 0;; ++round) {
        if (m_guess < 2.0) return exact_fallback();
        const double delta_round =
            delta / (2.0 * static_cast<double>(round + 1) * static_cast<double>(round + 2));
        const double theta = std::min(1.0, std::sqrt(loss * m_guess) / static_cast<double>(n));
        const double degree_cap = std::sqrt(m_guess / loss);
        const double log_term = std::log(6.0 * static_cast<double>(nbuckets + 1) / delta_round);
        const std::uint64_t k1 = static_cast<std::uint64_t>(std::ceil(12.0 * log_term / theta));

        // Falling back is judged on the marginal cost of the next phase: once
        // a phase costs as much as scanning every degree, scanning wins.
        if (2 * k1 >= n) return exact_fallback();
        if (used() + 2 * k1 >= budget) {
            throw std::runtime_error("degree estimator exceeded its query budget; graph may have no edges");
        }

        // Phase 1: classification sample.
        std::vector<std::pair<VertexId, std::uint32_t>> phase1;
        phase1.reserve(k1);
        std::vector<std::uint64_t> bucket_count(nbuckets, 0);
        for (std::uint64_t i = 0; i < k1; ++i) {
            const VertexId v = oracle.uniform_vertex();
            const std::uint32_t d = oracle.degree(v);
            phase1.emplace_back(v, d);
            if (d > 0) ++bucket_count[buckets.of_degree(d)];
        }

        const std::uint64_t count_threshold =
            std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(theta * static_cast<double>(k1) / 3.0)));
        std::vector<char> kept(nbuckets, 0);
        double max_kept_degree = 0.0;
        for (std::size_t b = 0; b < nbuckets; ++b) {
            if (bucket_count[b] >= count_threshold && buckets.lower_edge(b) < degree_cap) {
                kept[b] = 1;
                max_kept_degree = std::max(max_kept_degree, buckets.upper[b]);
            }
        }
        auto degree_kept = [&](std::uint32_t d) { return d > 0 && kept[buckets.of_degree(d)] != 0; };

        // Credited degree of one sampled vertex: zero when its bucket is
        // dropped, d or 2d otherwise depending on whether a random neighbor
        // lands in a dropped bucket. Costs 2 extra queries for kept samples.
        auto credited = [&](VertexId v, std::uint32_t d) -> double {
            if (!degree_kept(d)) return 0.0;
            const std::uint32_t idx = static_cast<std::uint32_t>(rng.below(d));
            const VertexId w = *oracle.neighbor(v, idx);
            const std::uint32_t dw = oracle.degree(w);
            return degree_kept(dw) ? static_cast<double>(d) : 2.0 * static_cast<double>(d);
        };

        double sum_y = 0.0;
        double sum_y2 = 0.0;
        std::uint64_t k_total = 0;
        for (const auto& [v, d] : phase1) {
            const double y = credited(v, d);
            sum_y += y;
            sum_y2 += y * y;
            ++k_total;
        }

        // Phase 2: extend the sample until a Bernstein bound puts the mean
        // within (1 +- eps/3), under the classification fixed above.
        const double mean1 = sum_y / static_cast<double>(k_total);
        if (mean1 > 0.0) {
            const double var1 = std::max(0.0, sum_y2 / static_cast<double>(k_total) - mean1 * mean1);
            const double range = 2.0 * max_kept_degree;
            const double tol = two_sided * mean1;
            const double z2 = 2.0 * std::log(6.0 / delta_round);
            const double k_needed =
                std::ceil(1.5 * (2.0 * var1 + (2.0 / 3.0) * range * tol) * z2 / (tol * tol));
            if (k_needed > static_cast<double>(k_total)) {
                const std::uint64_t k2 = static_cast<std::uint64_t>(k_needed) - k_total;
                if (4 * k2 >= n) return exact_fallback();
                if (used() + 4 * k2 >= budget) {
                    throw std::runtime_error("degree estimator exceeded its query budget");
                }
                for (std::uint64_t i = 0; i < k2; ++i) {
                    const VertexId v = oracle.uniform_vertex();
                    const std::uint32_t d = oracle.degree(v);
                    const double y = credited(v, d);
                    sum_y += y;
                    sum_y2 += y * y;
                    ++k_total;
                }
            }
        }

        const double m_raw = static_cast<double>(n) * sum_y / static_cast<double>(k_total);
        if (m_raw >= (1.0 - 2.0 * two_sided) * m_guess) {
            const double m_deflated = m_raw / (1.0 + two_sided);
            return {m_deflated / static_cast<double>(n), used(), EstimatorMode::sublinear};
        }
        // The rejected round still measured the reachable edge mass, so jump
        // straight toward it instead of walking down in halves (capped at a
        // 16x drop per round).
        double next = m_guess / 2.0;
        if (m_raw > 0.0) next = std::min(next, std::max(m_raw, m_guess / 16.0));
        m_guess = next;
    }
}

// Estimator dispatch used by preprocessing; exact mode isolates sampler
// behavior from estimation error in tests.
inline DegreeEstimate estimate_avg_degree(QueryOracle& oracle, EstimatorMode mode, double eps, double delta,
                                          Rng& rng) {
    if (mode == EstimatorMode::exact) return estimate_avg_degree_exact(oracle);
    return estimate_avg_degree_sublinear(oracle, eps, delta, rng);
}

} // namespace subedge
