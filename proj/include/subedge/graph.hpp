#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subedge {

using VertexId = std::uint32_t;

// One direction of an undirected edge. (u,v) and (v,u) are distinct values;
// all probability statements in this library are over oriented edges.
struct OrientedEdge {
    VertexId source = 0;
    VertexId target = 0;

    friend bool operator==(const OrientedEdge& a, const OrientedEdge& b) {
        return a.source == b.source && a.target == b.target;
    }
};

// Immutable simple undirected graph with fixed adjacency orderings.
// Neighbor order is construction order and never changes, so indexed
// neighbor queries are deterministic. m counts oriented edges (sum of
// degrees). Isolated vertices are allowed.
class Graph {
public:
    static Graph from_edges(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& undirected) {
        Graph g;
        g.adjacency_.assign(n, {});
        for (const auto& [u, v] : undirected) g.add_undirected(u, v);
        g.finalize();
        return g;
    }

    std::size_t num_vertices() const { return adjacency_.size(); }
    std::uint64_t num_oriented_edges() const { return oriented_edges_; }
    double avg_degree() const {
        return static_cast<double>(oriented_edges_) / static_cast<double>(adjacency_.size());
    }

    std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(adjacency_[v].size()); }
    const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }

    std::uint32_t max_degree() const {
        std::uint32_t d = 0;
        for (const auto& nb : adjacency_) d = std::max<std::uint32_t>(d, static_cast<std::uint32_t>(nb.size()));
        return d;
    }

    // Index of oriented edge (v, i-th neighbor of v) in [0, m). Used by the
    // harness to align distributions over the oriented-edge universe.
    std::uint64_t edge_index(VertexId v, std::uint32_t i) const { return offsets_[v] + i; }
    std::uint64_t vertex_offset(VertexId v) const { return offsets_[v]; }

    // Structural fingerprint (FNV-1a over n and adjacency). A sampler state
    // persisted against one graph refuses to run against another.
    std::uint64_t checksum() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t x) {
            for (int k = 0; k < 8; ++k) {
                h ^= (x >> (8 * k)) & 0xff;
                h *= 0x100000001b3ULL;
            }
        };
        mix(adjacency_.size());
        for (const auto& nb : adjacency_) {
            mix(nb.size());
            for (VertexId u : nb) mix(u);
        }
        return h;
    }

private:
    void add_undirected(VertexId u, VertexId v) {
        const std::size_t n = adjacency_.size();
        if (u >= n || v >= n) {
            throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                        " out of range (n=" + std::to_string(n) + ")");
        }
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        for (VertexId w : adjacency_[u]) {
            if (w == v) {
                throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
            }
        }
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }

    void finalize() {
        offsets_.assign(adjacency_.size() + 1, 0);
        std::uint64_t acc = 0;
        for (std::size_t v = 0; v < adjacency_.size(); ++v) {
            offsets_[v] = acc;
            acc += adjacency_[v].size();
        }
        offsets_[adjacency_.size()] = acc;
        oriented_edges_ = acc;
    }

    std::vector<std::vector<VertexId>> adjacency_;
    std::vector<std::uint64_t> offsets_;
    std::uint64_t oriented_edges_ = 0;
};

// Edge-list text format: optional "# n=<N>" header, one undirected edge
// "u v" per line, other "#" lines are comments. Without a header, n is
// max id + 1; a header wins.
inline Graph load_graph(std::istream& in) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    bool have_n = false;
    std::size_t n = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos) {
                std::size_t parsed = 0;
                try {
                    parsed = std::stoull(line.substr(pos + 2));
                } catch (const std::exception&) {
                    throw std::invalid_argument("line " + std::to_string(lineno) + ": bad n= header");
                }
                n = parsed;
                have_n = true;
            }
            continue;
        }
        std::istringstream ls(line);
        long long a = -1, b = -1;
        std::string extra;
        if (!(ls >> a >> b) || (ls >> extra) || a < 0 || b < 0) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected \"u v\", got \"" + line + "\"");
        }
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
        if (!have_n) n = std::max({n, static_cast<std::size_t>(a) + 1, static_cast<std::size_t>(b) + 1});
    }
    return Graph::from_edges(n, edges);
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_graph(in);
}

inline void save_graph(const Graph& g, std::ostream& out) {
    out << "# n=" << g.num_vertices() << "\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        for (VertexId u : g.neighbors(v)) {
            if (v < u) out << v << " " << u << "\n";
        }
    }
}

inline void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    save_graph(g, out);
}

} // namespace subedge
