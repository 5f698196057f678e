#pragma once

#include <vector>

#include "byzgrad/digraph.hpp"

namespace byzgrad::graph {

// dense square nonnegative matrix, row major
struct StochasticMatrix {
    int n = 0;
    std::vector<double> a;

    StochasticMatrix() = default;
    explicit StochasticMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    static StochasticMatrix identity(int n);
    static StochasticMatrix uniform(int n);
    static StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows);

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    std::vector<double> row(int i) const;
};

StochasticMatrix multiply(const StochasticMatrix& lhs, const StochasticMatrix& rhs);
std::vector<double> left_multiply(const std::vector<double>& pi, const StochasticMatrix& m);

bool is_row_stochastic(const StochasticMatrix& m, double tol = 1e-12);
bool is_row_substochastic(const StochasticMatrix& m, double tol = 1e-12);

// scrambling coefficient mu(S) = max_{i,j} (1 - sum_k min(s_ik, s_jk));
// < 1 exactly when every two rows overlap somewhere. throws
// not_substochastic_error for rows summing above 1 + tol or negative entries.
double ergodicity_coefficient(const StochasticMatrix& m, double tol = 1e-12);

// nonzero-pattern graph: arc (i, j) iff m[j][i] > tol, self flag from diagonal
SupportGraph support_graph(const StochasticMatrix& m, double tol = 0.0);

}  // namespace byzgrad::graph
