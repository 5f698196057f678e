#pragma once

#include <string>
#include <utility>
#include <vector>

namespace byzgrad::graph {

// simple directed graph; arc (u, v) carries information from u to v, so the
// neighbor set of v (its information sources) is in[v]. no self loops stored.
struct DiGraph {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;  // sorted, unique
    std::vector<std::vector<int>> out;      // out[u] sorted
    std::vector<std::vector<int>> in;       // in[v] sorted

    static DiGraph from_arcs(int n, std::vector<std::pair<int, int>> arcs);
    static DiGraph complete(int n);

    bool has_arc(int u, int v) const;
    int in_degree(int v) const { return static_cast<int>(in[v].size()); }
    int out_degree(int v) const { return static_cast<int>(out[v].size()); }

    bool operator==(const DiGraph& other) const { return n == other.n && arcs == other.arcs; }
};

DiGraph parse_graph_json(const std::string& text);
DiGraph load_graph_json(const std::string& path);
std::string graph_to_json(const DiGraph& g);

// vertices from which every other vertex is reachable; sorted, possibly empty
std::vector<int> roots(const DiGraph& g);

// number of roots; throws not_rooted_error when the graph has none
int kappa(const DiGraph& g);

// arc (i, j) in the result iff some k has (i, k) in earlier and (k, j) in
// later. with implicit_self_arcs both inputs are augmented with self arcs
// first, so the result contains the arcs of both inputs.
DiGraph compose(const DiGraph& later, const DiGraph& earlier, bool implicit_self_arcs = true);

// every pair of distinct vertices has a common information source
bool is_neighbor_shared(const DiGraph& g, bool implicit_self_arcs = true);

// support graph of a nonnegative matrix: off-diagonal arcs plus a per-vertex
// self-arc flag (the diagonal), which DiGraph itself never stores
struct SupportGraph {
    DiGraph arcs;
    std::vector<char> self;

    bool operator==(const SupportGraph& other) const {
        return arcs == other.arcs && self == other.self;
    }
};

SupportGraph compose(const SupportGraph& later, const SupportGraph& earlier);
bool is_neighbor_shared(const SupportGraph& g);

}  // namespace byzgrad::graph
