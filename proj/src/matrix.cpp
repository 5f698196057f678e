#include "byzgrad/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "byzgrad/errors.hpp"

namespace byzgrad::graph {

StochasticMatrix StochasticMatrix::identity(int n) {
    StochasticMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

StochasticMatrix StochasticMatrix::uniform(int n) {
    StochasticMatrix m(n);
    for (auto& x : m.a) x = 1.0 / n;
    return m;
}

StochasticMatrix StochasticMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    StochasticMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw size_mismatch_error("matrix rows must be square");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<double> StochasticMatrix::row(int i) const {
    return std::vector<double>(a.begin() + static_cast<std::size_t>(i) * n,
                               a.begin() + static_cast<std::size_t>(i + 1) * n);
}

StochasticMatrix multiply(const StochasticMatrix& lhs, const StochasticMatrix& rhs) {
    if (lhs.n != rhs.n) throw size_mismatch_error("matrix size mismatch");
    const int n = lhs.n;
    StochasticMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double v = lhs.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += v * rhs.at(k, j);
        }
    return out;
}

std::vector<double> left_multiply(const std::vector<double>& pi, const StochasticMatrix& m) {
    if (static_cast<int>(pi.size()) != m.n) throw size_mismatch_error("vector size mismatch");
    std::vector<double> out(m.n, 0.0);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out[j] += pi[i] * m.at(i, j);
    return out;
}

bool is_row_stochastic(const StochasticMatrix& m, double tol) {
    for (int i = 0; i < m.n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m.n; ++j) {
            if (m.at(i, j) < -tol) return false;
            sum += m.at(i, j);
        }
        if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
}

bool is_row_substochastic(const StochasticMatrix& m, double tol) {
    for (int i = 0; i < m.n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m.n; ++j) {
            if (m.at(i, j) < -tol) return false;
            sum += m.at(i, j);
        }
        if (sum > 1.0 + tol) return false;
    }
    return true;
}

double ergodicity_coefficient(const StochasticMatrix& m, double tol) {
    if (!is_row_substochastic(m, tol))
        throw not_substochastic_error("rows must be nonnegative with sums at most 1");
    double mu = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) {
            double overlap = 0.0;
            for (int k = 0; k < m.n; ++k) overlap += std::min(m.at(i, k), m.at(j, k));
            mu = std::max(mu, 1.0 - overlap);
        }
    return mu;
}

SupportGraph support_graph(const StochasticMatrix& m, double tol) {
    std::vector<std::pair<int, int>> arcs;
    std::vector<char> self(m.n, 0);
    for (int j = 0; j < m.n; ++j)
        for (int i = 0; i < m.n; ++i) {
            if (m.at(j, i) <= tol) continue;
            if (i == j)
                self[j] = 1;
            else
                arcs.emplace_back(i, j);  // row j draws from column i
        }
    return SupportGraph{DiGraph::from_arcs(m.n, std::move(arcs)), std::move(self)};
}

}  // namespace byzgrad::graph
