#include <vector>

#include "byzgrad/errors.hpp"
#include "byzgrad/matrix.hpp"
#include "doctest.h"
#include "oracles.hpp"

using byzgrad::graph::StochasticMatrix;

namespace {

StochasticMatrix random_stochastic(std::mt19937_64& rng, int n) {
    StochasticMatrix m(n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            m.at(i, j) = oracle::uniform(rng, 0.0, 1.0);
            sum += m.at(i, j);
        }
        for (int j = 0; j < n; ++j) m.at(i, j) /= sum;
    }
    return m;
}

}  // namespace

TEST_CASE("scrambling coefficient on hand matrices") {
    auto m = StochasticMatrix::from_rows({{0.5, 0.5}, {0.0, 1.0}});
    CHECK(byzgrad::graph::ergodicity_coefficient(m) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(byzgrad::graph::ergodicity_coefficient(StochasticMatrix::identity(3)) ==
          doctest::Approx(1.0));
    CHECK(byzgrad::graph::ergodicity_coefficient(StochasticMatrix::uniform(4)) ==
          doctest::Approx(0.0));

    auto bad = StochasticMatrix::from_rows({{0.9, 0.3}, {0.5, 0.5}});
    CHECK_THROWS_AS(byzgrad::graph::ergodicity_coefficient(bad),
                    byzgrad::not_substochastic_error);
    auto neg = StochasticMatrix::from_rows({{1.1, -0.1}, {0.5, 0.5}});
    CHECK_THROWS_AS(byzgrad::graph::ergodicity_coefficient(neg),
                    byzgrad::not_substochastic_error);
}

TEST_CASE("coefficient is submultiplicative over products") {
    auto rng = oracle::rng(5);
    for (int round = 0; round < 40; ++round) {
        const int n = oracle::uniform_int(rng, 2, 5);
        auto a = random_stochastic(rng, n);
        auto b = random_stochastic(rng, n);
        auto ab = byzgrad::graph::multiply(a, b);
        CHECK(byzgrad::graph::is_row_stochastic(ab, 1e-9));
        const double mu_ab = byzgrad::graph::ergodicity_coefficient(ab, 1e-9);
        const double bound = byzgrad::graph::ergodicity_coefficient(a, 1e-9) *
                             byzgrad::graph::ergodicity_coefficient(b, 1e-9);
        CHECK(mu_ab <= bound + 1e-9);
    }
}

TEST_CASE("multiply and left_multiply against hand results") {
    auto a = StochasticMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    auto b = StochasticMatrix::from_rows({{5.0, 6.0}, {7.0, 8.0}});
    auto ab = byzgrad::graph::multiply(a, b);
    CHECK(ab.at(0, 0) == doctest::Approx(19.0));
    CHECK(ab.at(0, 1) == doctest::Approx(22.0));
    CHECK(ab.at(1, 0) == doctest::Approx(43.0));
    CHECK(ab.at(1, 1) == doctest::Approx(50.0));

    auto pi = byzgrad::graph::left_multiply({1.0, 1.0}, a);
    CHECK(pi[0] == doctest::Approx(4.0));
    CHECK(pi[1] == doctest::Approx(6.0));

    CHECK_THROWS_AS(byzgrad::graph::left_multiply({1.0}, a), byzgrad::size_mismatch_error);
}

TEST_CASE("stochasticity predicates") {
    CHECK(byzgrad::graph::is_row_stochastic(StochasticMatrix::uniform(3)));
    CHECK(!byzgrad::graph::is_row_stochastic(StochasticMatrix(2)));
    CHECK(byzgrad::graph::is_row_substochastic(StochasticMatrix(2)));
    auto half = StochasticMatrix::from_rows({{0.25, 0.25}, {0.5, 0.5}});
    CHECK(!byzgrad::graph::is_row_stochastic(half));
    CHECK(byzgrad::graph::is_row_substochastic(half));
}

TEST_CASE("support graph reads arcs as information flow") {
    // row i of the matrix lists the sources feeding agent i
    auto m = StochasticMatrix::from_rows({{0.5, 0.5, 0.0},  //
                                          {0.0, 1.0, 0.0},
                                          {0.2, 0.0, 0.8}});
    auto sg = byzgrad::graph::support_graph(m);
    CHECK(sg.self == std::vector<char>{1, 1, 1});
    CHECK(sg.arcs.arcs == std::vector<std::pair<int, int>>{{0, 2}, {1, 0}});
    CHECK(byzgrad::graph::support_graph(m, 0.3).arcs.arcs ==
          std::vector<std::pair<int, int>>{{1, 0}});
}

TEST_CASE("row helpers") {
    auto m = StochasticMatrix::from_rows({{0.1, 0.9}, {0.4, 0.6}});
    CHECK(m.row(1) == std::vector<double>{0.4, 0.6});
    CHECK_THROWS_AS(StochasticMatrix::from_rows({{1.0, 0.0}, {1.0}}),
                    byzgrad::size_mismatch_error);
}
