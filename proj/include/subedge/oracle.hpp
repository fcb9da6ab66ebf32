#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "subedge/graph.hpp"
#include "subedge/rng.hpp"

namespace subedge {

struct QueryCounters {
    std::uint64_t uniform_vertex = 0;
    std::uint64_t degree = 0;
    std::uint64_t neighbor = 0;

    std::uint64_t total() const { return uniform_vertex + degree + neighbor; }

    QueryCounters operator-(const QueryCounters& o) const {
        return {uniform_vertex - o.uniform_vertex, degree - o.degree, neighbor - o.neighbor};
    }
};

// The only sanctioned access path to a graph for the sampling algorithms:
// uniform vertex, degree, and indexed neighbor queries, each metered
// exactly. The oracle owns the randomness of uniform vertex draws.
// Single-owner; concurrent experiments create one oracle per worker.
class QueryOracle {
public:
    QueryOracle(const Graph& g, std::uint64_t seed) : graph_(g), rng_(seed) {
        if (g.num_vertices() == 0) throw std::invalid_argument("oracle needs a non-empty vertex set");
    }

    std::size_t num_vertices() const { return graph_.num_vertices(); }

    VertexId uniform_vertex() {
        ++counters_.uniform_vertex;
        return static_cast<VertexId>(rng_.below(graph_.num_vertices()));
    }

    std::uint32_t degree(VertexId v) {
        check_vertex(v);
        ++counters_.degree;
        return graph_.degree(v);
    }

    // i-th neighbor of v if i < degree(v), absent otherwise. Counts as a
    // neighbor query either way.
    std::optional<VertexId> neighbor(VertexId v, std::uint32_t i) {
        check_vertex(v);
        ++counters_.neighbor;
        const auto& nb = graph_.neighbors(v);
        if (i >= nb.size()) return std::nullopt;
        return nb[i];
    }

    const QueryCounters& counters() const { return counters_; }

private:
    void check_vertex(VertexId v) const {
        if (v >= graph_.num_vertices()) {
            throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
        }
    }

    const Graph& graph_;
    Rng rng_;
    QueryCounters counters_;
};

} // namespace subedge
