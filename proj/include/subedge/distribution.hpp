#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subedge/graph.hpp"

namespace subedge {

enum class DistributionKind { exact, empirical };

// Probability mass over the oriented-edge universe of one graph, aligned
// with Graph::edge_index. Exact distributions are analytic; empirical ones
// are normalized counts.
struct EdgeDistribution {
    DistributionKind kind = DistributionKind::exact;
    std::uint64_t sample_count = 0; // draws behind an empirical distribution
    std::vector<double> mass;       // size = number of oriented edges

    double sum() const {
        long double acc = 0.0L;
        for (double p : mass) acc += p;
        return static_cast<double>(acc);
    }
};

inline EdgeDistribution uniform_distribution(const Graph& g) {
    const std::uint64_t m = g.num_oriented_edges();
    if (m == 0) throw std::invalid_argument("uniform edge distribution undefined on an empty graph");
    EdgeDistribution d;
    d.kind = DistributionKind::exact;
    d.mass.assign(m, 1.0 / static_cast<double>(m));
    return d;
}

// max over the universe of |P(e) - Q(e)| / Q(e). Both distributions must
// cover the same universe and Q must be positive everywhere on it.
inline double pointwise_deviation(const EdgeDistribution& p, const EdgeDistribution& q) {
    if (p.mass.size() != q.mass.size()) throw std::invalid_argument("pointwise_deviation: universe mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        if (q.mass[i] <= 0.0) throw std::invalid_argument("pointwise_deviation: reference mass is zero on an edge");
        worst = std::max(worst, std::fabs(p.mass[i] - q.mass[i]) / q.mass[i]);
    }
    return worst;
}

// Total variation distance, half the L1 distance.
inline double tvd(const EdgeDistribution& p, const EdgeDistribution& q) {
    if (p.mass.size() != q.mass.size()) throw std::invalid_argument("tvd: universe mismatch");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        acc += std::fabs(p.mass[i] - q.mass[i]);
    }
    return static_cast<double>(acc / 2.0L);
}

} // namespace subedge
