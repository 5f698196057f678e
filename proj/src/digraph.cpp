#include "byzgrad/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "byzgrad/errors.hpp"

namespace byzgrad::graph {

DiGraph DiGraph::from_arcs(int n, std::vector<std::pair<int, int>> arcs) {
    if (n <= 0) throw invalid_params_error("graph needs at least one vertex");
    for (auto [u, v] : arcs) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw invalid_params_error("arc endpoint out of range");
        if (u == v) throw invalid_params_error("self loops are not stored");
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    DiGraph g;
    g.n = n;
    g.arcs = std::move(arcs);
    g.out.assign(n, {});
    g.in.assign(n, {});
    for (auto [u, v] : g.arcs) {
        g.out[u].push_back(v);
        g.in[v].push_back(u);
    }
    return g;
}

DiGraph DiGraph::complete(int n) {
    std::vector<std::pair<int, int>> arcs;
    arcs.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    return from_arcs(n, std::move(arcs));
}

bool DiGraph::has_arc(int u, int v) const {
    const auto& row = out[u];
    return std::binary_search(row.begin(), row.end(), v);
}

DiGraph parse_graph_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("bad graph json: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("edges"))
        throw io_error("graph json needs fields n and edges");
    int n = j["n"].get<int>();
    std::vector<std::pair<int, int>> arcs;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw io_error("each edge must be [from, to]");
        arcs.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return DiGraph::from_arcs(n, std::move(arcs));
}

DiGraph load_graph_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open graph file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_graph_json(ss.str());
}

std::string graph_to_json(const DiGraph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.arcs) edges.push_back({u, v});
    j["edges"] = edges;
    return j.dump();
}

namespace {

int reach_count(const DiGraph& g, int start) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : g.out[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count;
}

}  // namespace

std::vector<int> roots(const DiGraph& g) {
    // roots form the unique source component of the condensation; one forward
    // search tells whether a candidate reaches everything, and any root's
    // in-neighbors are roots too, so scanning all vertices stays cheap at the
    // sizes handled here
    std::vector<int> out;
    for (int v = 0; v < g.n; ++v)
        if (reach_count(g, v) == g.n) out.push_back(v);
    return out;
}

int kappa(const DiGraph& g) {
    auto r = roots(g);
    if (r.empty()) throw not_rooted_error("graph has no root");
    return static_cast<int>(r.size());
}

DiGraph compose(const DiGraph& later, const DiGraph& earlier, bool implicit_self_arcs) {
    if (later.n != earlier.n) throw size_mismatch_error("composition needs equal vertex sets");
    const int n = later.n;
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < n; ++i) {
        std::vector<char> hit(n, 0);
        auto mids = earlier.out[i];
        if (implicit_self_arcs) mids.push_back(i);
        for (int k : mids) {
            for (int j : later.out[k])
                if (j != i) hit[j] = 1;
            if (implicit_self_arcs && k != i) hit[k] = 1;
        }
        for (int j = 0; j < n; ++j)
            if (hit[j]) arcs.emplace_back(i, j);
    }
    return DiGraph::from_arcs(n, std::move(arcs));
}

bool is_neighbor_shared(const DiGraph& g, bool implicit_self_arcs) {
    SupportGraph sg{g, std::vector<char>(g.n, implicit_self_arcs ? 1 : 0)};
    return is_neighbor_shared(sg);
}

SupportGraph compose(const SupportGraph& later, const SupportGraph& earlier) {
    if (later.arcs.n != earlier.arcs.n)
        throw size_mismatch_error("composition needs equal vertex sets");
    const int n = later.arcs.n;
    std::vector<std::pair<int, int>> arcs;
    std::vector<char> self(n, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<char> hit(n, 0);
        auto step = [&](int k) {
            for (int j : later.arcs.out[k]) hit[j] = 1;
            if (later.self[k]) hit[k] = 1;
        };
        for (int k : earlier.arcs.out[i]) step(k);
        if (earlier.self[i]) step(i);
        self[i] = hit[i];
        for (int j = 0; j < n; ++j)
            if (hit[j] && j != i) arcs.emplace_back(i, j);
    }
    return SupportGraph{DiGraph::from_arcs(n, std::move(arcs)), std::move(self)};
}

bool is_neighbor_shared(const SupportGraph& g) {
    const int n = g.arcs.n;
    // sources[v] = in-neighbors of v, plus v itself when it has a self arc
    std::vector<std::vector<char>> sources(n, std::vector<char>(n, 0));
    for (int v = 0; v < n; ++v) {
        for (int u : g.arcs.in[v]) sources[v][u] = 1;
        if (g.self[v]) sources[v][v] = 1;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            bool shared = false;
            for (int k = 0; k < n && !shared; ++k) shared = sources[a][k] && sources[b][k];
            if (!shared) return false;
        }
    return true;
}

}  // namespace byzgrad::graph
