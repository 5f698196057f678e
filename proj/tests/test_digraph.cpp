#include <algorithm>
#include <vector>

#include "byzgrad/digraph.hpp"
#include "byzgrad/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using byzgrad::graph::DiGraph;
using byzgrad::graph::SupportGraph;

TEST_CASE("from_arcs sorts, dedups and validates") {
    auto g = DiGraph::from_arcs(3, {{2, 0}, {0, 1}, {2, 0}, {1, 2}});
    CHECK(g.arcs == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
    CHECK(g.in[0] == std::vector<int>{2});
    CHECK(g.out[2] == std::vector<int>{0});
    CHECK(g.has_arc(1, 2));
    CHECK(!g.has_arc(2, 1));

    CHECK_THROWS_AS(DiGraph::from_arcs(0, {}), byzgrad::invalid_params_error);
    CHECK_THROWS_AS(DiGraph::from_arcs(2, {{0, 2}}), byzgrad::invalid_params_error);
    CHECK_THROWS_AS(DiGraph::from_arcs(2, {{1, 1}}), byzgrad::invalid_params_error);
}

TEST_CASE("roots on hand graphs") {
    auto path = DiGraph::from_arcs(3, {{0, 1}, {1, 2}});
    CHECK(byzgrad::graph::roots(path) == std::vector<int>{0});

    auto cycle = DiGraph::from_arcs(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(byzgrad::graph::roots(cycle) == std::vector<int>{0, 1, 2, 3});

    auto split = DiGraph::from_arcs(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    CHECK(byzgrad::graph::roots(split).empty());
    CHECK_THROWS_AS(byzgrad::graph::kappa(split), byzgrad::not_rooted_error);

    CHECK(byzgrad::graph::kappa(DiGraph::complete(4)) == 4);
}

TEST_CASE("roots agree with closure oracle on random graphs") {
    auto rng = oracle::rng(11);
    for (int round = 0; round < 60; ++round) {
        const int n = oracle::uniform_int(rng, 2, 7);
        oracle::ArcSet arcs;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v && oracle::uniform(rng, 0.0, 1.0) < 0.3) arcs.push_back({u, v});
        auto g = DiGraph::from_arcs(n, arcs);
        CHECK(byzgrad::graph::roots(g) == oracle::roots(n, arcs));
    }
}

TEST_CASE("compose gives two step reachability") {
    auto chain = DiGraph::from_arcs(4, {{0, 1}, {1, 2}, {2, 3}});
    auto two = compose(chain, chain);
    // with self arcs the one step arcs survive and two step arcs appear
    for (auto [u, v] : chain.arcs) CHECK(two.has_arc(u, v));
    CHECK(two.has_arc(0, 2));
    CHECK(two.has_arc(1, 3));
    CHECK(!two.has_arc(0, 3));

    auto strict = compose(chain, chain, false);
    CHECK(strict.arcs == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});

    CHECK_THROWS_AS(compose(chain, DiGraph::complete(3)), byzgrad::size_mismatch_error);
}

TEST_CASE("support graph composition tracks the diagonal") {
    auto arcs = DiGraph::from_arcs(2, {{0, 1}});
    SupportGraph a{arcs, {1, 0}};  // 1 has no self weight
    auto sq = compose(a, a);
    CHECK(sq.self == std::vector<char>{1, 0});
    CHECK(sq.arcs.has_arc(0, 1));

    SupportGraph b{arcs, {1, 1}};
    auto sq2 = compose(b, b);
    CHECK(sq2.self == std::vector<char>{1, 1});
}

TEST_CASE("neighbor sharing") {
    CHECK(byzgrad::graph::is_neighbor_shared(DiGraph::complete(4)));
    auto star = DiGraph::from_arcs(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(byzgrad::graph::is_neighbor_shared(star));

    auto cycle = DiGraph::from_arcs(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(!byzgrad::graph::is_neighbor_shared(cycle));
    // antipodal closed neighborhoods {3,0} and {1,2} stay disjoint
    CHECK(!byzgrad::graph::is_neighbor_shared(cycle, true));
}

TEST_CASE("graph json roundtrip") {
    auto g = DiGraph::from_arcs(5, {{0, 1}, {1, 2}, {2, 0}, {3, 4}});
    CHECK(byzgrad::graph::parse_graph_json(byzgrad::graph::graph_to_json(g)) == g);

    CHECK_THROWS_AS(byzgrad::graph::parse_graph_json("not json"), byzgrad::io_error);
    CHECK_THROWS_AS(byzgrad::graph::parse_graph_json("{\"n\": 3}"), byzgrad::io_error);
    CHECK_THROWS_AS(byzgrad::graph::parse_graph_json("{\"n\": 2, \"edges\": [[0]]}"),
                    byzgrad::io_error);
    CHECK_THROWS_AS(byzgrad::graph::load_graph_json("/nonexistent/g.json"), byzgrad::io_error);
}
