#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subedge/graph.hpp"
#include "subedge/rng.hpp"

namespace subedge {

// Test-graph families. star/lollipop/clique_plus_bipartite stress the
// light/heavy degree split; clique and erdos_renyi are near-regular.
namespace gen {

inline Graph star(std::size_t n) {
    if (n < 2) throw std::invalid_argument("star needs n >= 2");
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(n - 1);
    for (VertexId leaf = 1; leaf < n; ++leaf) edges.emplace_back(0, leaf);
    return Graph::from_edges(n, edges);
}

inline Graph clique(std::size_t k) {
    if (k < 2) throw std::invalid_argument("clique needs k >= 2");
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(k * (k - 1) / 2);
    for (VertexId i = 0; i < k; ++i)
        for (VertexId j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(k, edges);
}

// Clique K_k on [0,k) plus a path of path_len edges hanging off vertex k-1.
inline Graph lollipop(std::size_t k, std::size_t path_len) {
    if (k < 2) throw std::invalid_argument("lollipop needs clique size >= 2");
    if (path_len == 0) throw std::invalid_argument("lollipop needs path_len >= 1");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < k; ++i)
        for (VertexId j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    VertexId prev = static_cast<VertexId>(k - 1);
    for (std::size_t s = 0; s < path_len; ++s) {
        const VertexId next = static_cast<VertexId>(k + s);
        edges.emplace_back(prev, next);
        prev = next;
    }
    return Graph::from_edges(k + path_len, edges);
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("erdos_renyi needs n >= 2");
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi needs p in (0,1]");
    Rng rng(substream_seed(seed, "gen/erdos_renyi"));
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            if (rng.next_double() < p) edges.emplace_back(i, j);
    if (edges.empty()) throw std::invalid_argument("erdos_renyi produced an empty graph; raise p or n");
    return Graph::from_edges(n, edges);
}

// Disjoint union of K_k and a complete bipartite graph with sides a and b.
// The small side of the bipartite part carries very high degree, giving a
// graph whose edge mass hugely concentrates on a few heavy vertices.
inline Graph clique_plus_bipartite(std::size_t k, std::size_t a, std::size_t b) {
    if (k < 2 || a < 1 || b < 1) throw std::invalid_argument("clique_plus_bipartite needs k >= 2, a,b >= 1");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < k; ++i)
        for (VertexId j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    const VertexId left0 = static_cast<VertexId>(k);
    const VertexId right0 = static_cast<VertexId>(k + a);
    for (VertexId i = 0; i < a; ++i)
        for (VertexId j = 0; j < b; ++j) edges.emplace_back(left0 + i, right0 + j);
    return Graph::from_edges(k + a + b, edges);
}

} // namespace gen

// Generator spec strings, e.g. "star:101", "clique:5", "lollipop:32,400",
// "erdos_renyi:500,0.02", "clique_plus_bipartite:12,8,160". The same string
// plus a seed fully determines the graph.
inline Graph generate_graph(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            args.push_back(rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto num = [&](std::size_t i) -> std::size_t {
        if (i >= args.size()) throw std::invalid_argument("generator spec \"" + spec + "\": missing argument");
        return static_cast<std::size_t>(std::stoull(args[i]));
    };
    auto real = [&](std::size_t i) -> double {
        if (i >= args.size()) throw std::invalid_argument("generator spec \"" + spec + "\": missing argument");
        return std::stod(args[i]);
    };
    if (name == "star") return gen::star(num(0));
    if (name == "clique") return gen::clique(num(0));
    if (name == "lollipop") return gen::lollipop(num(0), num(1));
    if (name == "erdos_renyi") return gen::erdos_renyi(num(0), real(1), seed);
    if (name == "clique_plus_bipartite") return gen::clique_plus_bipartite(num(0), num(1), num(2));
    throw std::invalid_argument("unknown generator: \"" + name + "\"");
}

} // namespace subedge
