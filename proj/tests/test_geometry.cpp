#include <cmath>
#include <vector>

#include "byzgrad/errors.hpp"
#include "byzgrad/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace byzgrad::geom;

namespace {

PointSet pts1(std::vector<double> xs) {
    PointSet ps;
    ps.dim = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ps.ids.push_back(static_cast<int>(i));
        ps.pts.push_back({xs[i]});
    }
    return ps;
}

PointSet pts2(std::vector<std::vector<double>> xs) {
    PointSet ps;
    ps.dim = 2;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ps.ids.push_back(static_cast<int>(i));
        ps.pts.push_back(xs[i]);
    }
    return ps;
}

}  // namespace

TEST_CASE("subset families are lexicographic over sorted distinct ids") {
    auto fam = subset_families({3, 1, 2, 0, 2}, 1, 1);
    REQUIRE(fam.a_sets.size() == 4);
    CHECK(fam.a_sets[0] == std::vector<int>{0, 1, 2});
    CHECK(fam.a_sets[1] == std::vector<int>{0, 1, 3});
    CHECK(fam.a_sets[2] == std::vector<int>{0, 2, 3});
    CHECK(fam.a_sets[3] == std::vector<int>{1, 2, 3});
    REQUIRE(fam.b_sets.size() == 4);
    CHECK(fam.b_sets[0] ==
          std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});

    // beta = 0 trims nothing: singleton families
    auto none = subset_families({5, 4}, 2, 0);
    CHECK(none.a_sets == std::vector<std::vector<int>>{{4}, {5}});
    CHECK(none.b_sets[0] == std::vector<std::vector<int>>{{4}});

    CHECK_THROWS_AS(subset_families({0, 1}, 1, 1), byzgrad::too_few_neighbors_error);
    CHECK_THROWS_AS(subset_families({0, 1, 2}, 0, 1), byzgrad::invalid_params_error);
}

TEST_CASE("hull membership") {
    auto seg = pts1({1.0, 2.0});
    auto w = hull_membership({1.5}, seg);
    REQUIRE(w.has_value());
    CHECK((*w)[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK((*w)[1] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(!hull_membership({3.0}, seg).has_value());
    CHECK(!hull_membership({0.0}, PointSet{1, {}, {}}).has_value());

    auto tri = pts2({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    auto w2 = hull_membership({0.25, 0.25}, tri);
    REQUIRE(w2.has_value());
    double sum = 0.0, rx = 0.0, ry = 0.0;
    for (std::size_t j = 0; j < w2->size(); ++j) {
        sum += (*w2)[j];
        rx += (*w2)[j] * tri.pts[j][0];
        ry += (*w2)[j] * tri.pts[j][1];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rx == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(ry == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(!hull_membership({0.6, 0.6}, tri).has_value());

    CHECK_THROWS_AS(hull_membership({0.0, 0.0}, seg), byzgrad::size_mismatch_error);
}

TEST_CASE("interval intersection") {
    HullSystem hs{1, {pts1({0.0, 2.0}), pts1({3.0, 1.0})}};
    auto iv = intersect_intervals(hs);
    CHECK(iv.lo == doctest::Approx(1.0));
    CHECK(iv.hi == doctest::Approx(2.0));

    HullSystem disjoint{1, {pts1({0.0, 1.0}), pts1({2.0, 3.0})}};
    CHECK_THROWS_AS(intersect_intervals(disjoint), byzgrad::empty_intersection_error);
    CHECK_THROWS_AS(intersect_intervals(HullSystem{2, {}}), byzgrad::invalid_params_error);
}

TEST_CASE("pairwise hulls of three reals meet at the median") {
    // the b-set hulls of one a-set over values {0, 1, 2}
    HullSystem hs{1, {pts1({0.0, 1.0}), pts1({0.0, 2.0}), pts1({1.0, 2.0})}};
    auto r = pick_intersection_point(hs);
    CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.cert.max_residual <= 1e-10);
    REQUIRE(r.cert.hull_weights.size() == 3);

    auto lp = pick_intersection_point(hs, PickPolicy::lp);
    CHECK(lp.point[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(lp.cert.max_residual <= 1e-8);
}

TEST_CASE("pair hulls of any three reals always intersect") {
    auto rng = oracle::rng(13);
    for (int round = 0; round < 200; ++round) {
        std::vector<double> v{oracle::uniform(rng, -1.0, 1.0), oracle::uniform(rng, -1.0, 1.0),
                              oracle::uniform(rng, -1.0, 1.0)};
        HullSystem hs{1,
                      {pts1({v[0], v[1]}), pts1({v[0], v[2]}), pts1({v[1], v[2]})}};
        auto r = pick_intersection_point(hs);
        for (const auto& hull : hs.hulls) {
            double lo = std::min(hull.pts[0][0], hull.pts[1][0]);
            double hi = std::max(hull.pts[0][0], hull.pts[1][0]);
            CHECK(r.point[0] >= lo - 1e-9);
            CHECK(r.point[0] <= hi + 1e-9);
        }
    }
}

TEST_CASE("planar pick lands in every hull") {
    HullSystem hs{2,
                  {pts2({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}}),
                   pts2({{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}}),
                   pts2({{0.2, 0.2}, {3.0, 0.2}, {0.2, 3.0}})}};
    auto r = pick_intersection_point(hs);
    CHECK(r.cert.max_residual <= 1e-8);
    for (const auto& hull : hs.hulls) CHECK(hull_membership(r.point, hull, 1e-6).has_value());

    HullSystem far{2,
                   {pts2({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}),
                    pts2({{5.0, 5.0}, {6.0, 5.0}, {5.0, 6.0}})}};
    CHECK_THROWS_AS(pick_intersection_point(far), byzgrad::infeasible_error);

    CHECK_THROWS_AS(pick_intersection_point(hs, PickPolicy::interval_midpoint),
                    byzgrad::invalid_params_error);
}

TEST_CASE("degenerate single point hulls") {
    HullSystem same{1, {pts1({4.0}), pts1({4.0})}};
    auto r = pick_intersection_point(same);
    CHECK(r.point[0] == doctest::Approx(4.0));
    CHECK(r.cert.max_residual == 0.0);

    HullSystem apart{1, {pts1({4.0}), pts1({5.0})}};
    CHECK_THROWS_AS(pick_intersection_point(apart), byzgrad::empty_intersection_error);
}

TEST_CASE("certificate residual audits tampered weights") {
    HullSystem hs{1, {pts1({0.0, 2.0})}};
    auto r = pick_intersection_point(hs);
    CHECK(certificate_residual(hs, r) == r.cert.max_residual);
    r.cert.hull_weights[0][0] += 0.25;
    CHECK(certificate_residual(hs, r) >= 0.25 - 1e-12);
}
