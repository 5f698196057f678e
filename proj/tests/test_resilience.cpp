#include <algorithm>
#include <vector>

#include "byzgrad/digraph.hpp"
#include "byzgrad/errors.hpp"
#include "byzgrad/resilience.hpp"
#include "doctest.h"
#include "oracles.hpp"

using byzgrad::graph::DiGraph;

namespace {

DiGraph cycle(int n) {
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
    return DiGraph::from_arcs(n, arcs);
}

DiGraph undirected_path4() {
    return DiGraph::from_arcs(4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}});
}

}  // namespace

TEST_CASE("complete graphs under one removal plus one arc deletion") {
    auto k4 = DiGraph::complete(4);
    auto rep = byzgrad::graph::check_resilient(k4, 1, 1);
    CHECK(rep.resilient);
    CHECK(!rep.witness.has_value());
    CHECK(rep.checked == 32);
    CHECK(byzgrad::graph::kappa_rs(k4, 1, 1) == 2);

    auto k5 = DiGraph::complete(5);
    CHECK(byzgrad::graph::check_resilient(k5, 1, 1).checked == 405);
    CHECK(byzgrad::graph::kappa_rs(k5, 1, 1) == 3);
}

TEST_CASE("directed cycle survives vertex removal alone") {
    auto c4 = cycle(4);
    CHECK(byzgrad::graph::is_resilient(c4, 1, 0));
    CHECK(byzgrad::graph::kappa_rs(c4, 1, 0) == 1);
    // the degree filter is sufficient only with arc deletions in play
    CHECK(!byzgrad::graph::min_neighbor_precheck(c4, 1, 0));
    CHECK(byzgrad::graph::min_neighbor_precheck(DiGraph::complete(4), 1, 1));
}

TEST_CASE("path graph fails with the lex-first witness") {
    auto p4 = undirected_path4();
    auto rep = byzgrad::graph::check_resilient(p4, 1, 0);
    CHECK(!rep.resilient);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->kept == std::vector<int>{0, 1, 3});
    CHECK(rep.witness->removed_arcs.empty());
    CHECK_THROWS_AS(byzgrad::graph::kappa_rs(p4, 1, 0), byzgrad::not_resilient_error);
}

TEST_CASE("verdicts match the closure oracle on random graphs") {
    auto rng = oracle::rng(37);
    for (int round = 0; round < 30; ++round) {
        const int n = oracle::uniform_int(rng, 3, 6);
        oracle::ArcSet arcs;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v && oracle::uniform(rng, 0.0, 1.0) < 0.55) arcs.push_back({u, v});
        auto g = DiGraph::from_arcs(n, arcs);
        const int r = oracle::uniform_int(rng, 0, 1);
        const int s = oracle::uniform_int(rng, 0, 1);
        const auto want = oracle::resilience(n, arcs, r, s);
        auto rep = byzgrad::graph::check_resilient(g, r, s, 1);
        CHECK(rep.resilient == want.resilient);
        if (want.resilient) {
            CHECK(rep.checked == want.count);
            CHECK(byzgrad::graph::kappa_rs(g, r, s, 1) == want.kappa);
        } else {
            REQUIRE(rep.witness.has_value());
            CHECK(rep.witness->kept == want.first_bad_kept);
        }
    }
}

TEST_CASE("serial and parallel paths agree") {
    for (const auto& g : {DiGraph::complete(4), DiGraph::complete(5), undirected_path4()}) {
        const int s = g.n >= 4 && g.in_degree(0) >= 3 ? 1 : 0;
        auto serial = byzgrad::graph::check_resilient(g, 1, s, 1);
        auto parallel = byzgrad::graph::check_resilient(g, 1, s, 4);
        CHECK(serial.resilient == parallel.resilient);
        CHECK(serial.witness == parallel.witness);
        if (serial.resilient) {
            CHECK(serial.checked == parallel.checked);
            CHECK(byzgrad::graph::kappa_rs(g, 1, s, 1) == byzgrad::graph::kappa_rs(g, 1, s, 4));
        }
    }
}

TEST_CASE("sampling is seed-deterministic and consistent on small graphs") {
    auto k5 = DiGraph::complete(5);
    auto a = byzgrad::graph::sample_resilience(k5, 1, 1, 200, 99);
    auto b = byzgrad::graph::sample_resilience(k5, 1, 1, 200, 99);
    CHECK(a.all_rooted == b.all_rooted);
    CHECK(a.min_kappa == b.min_kappa);
    CHECK(a.samples == 200);
    CHECK(a.all_rooted);
    CHECK(a.min_kappa >= byzgrad::graph::kappa_rs(k5, 1, 1));

    auto p4 = undirected_path4();
    auto c = byzgrad::graph::sample_resilience(p4, 1, 0, 500, 7);
    CHECK(!c.all_rooted);
}
