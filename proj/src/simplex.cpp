#include "byzgrad/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "byzgrad/errors.hpp"

namespace byzgrad::geom {

FeasibilityResult phase_one_feasible(const std::vector<std::vector<double>>& A,
                                     const std::vector<double>& b, const LpOptions& opt) {
    const int m = static_cast<int>(A.size());
    const int n = m > 0 ? static_cast<int>(A[0].size()) : 0;
    if (static_cast<int>(b.size()) != m) throw size_mismatch_error("rhs size mismatch");
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != n) throw size_mismatch_error("ragged constraint matrix");

    // tableau: n structural columns, m artificial columns, rhs
    const int cols = n + m;
    std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
    for (int i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t[i][j] = sign * A[i][j];
        t[i][n + i] = 1.0;
        t[i][cols] = sign * b[i];
    }

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // reduced costs for minimizing the artificial sum
    std::vector<double> d(cols, 0.0);
    double w = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < cols; ++j) d[j] -= t[i][j];
        w += t[i][cols];
    }
    for (int i = 0; i < m; ++i) d[n + i] = 0.0;

    auto pivot = [&](int pr, int pc) {
        const double inv = 1.0 / t[pr][pc];
        for (int j = 0; j <= cols; ++j) t[pr][j] *= inv;
        t[pr][pc] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            const double f = t[i][pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[pr][j];
            t[i][pc] = 0.0;
        }
        const double f = d[pc];
        if (f != 0.0) {
            for (int j = 0; j < cols; ++j) d[j] -= f * t[pr][j];
            w += f * t[pr][cols];
            d[pc] = 0.0;
        }
        basis[pr] = pc;
    };

    // Most-negative entering with a largest-pivot tie-break keeps the pivots
    // well conditioned; pure lowest-index selection happily pivots on near
    // zero elements and the tableau drifts. Bland's rule takes over once the
    // objective stalls so degenerate bases cannot cycle, and the cap guards
    // against float noise breaking even that exact-arithmetic argument.
    const long max_pivots = 1000 + 200L * (m + cols);
    long stalled = 0;
    double last_w = w;
    for (long it = 0; it < max_pivots; ++it) {
        const bool bland = stalled > 50;
        int enter = -1;
        if (bland) {
            for (int j = 0; j < cols; ++j)
                if (d[j] < -opt.pivot_tol) {
                    enter = j;
                    break;
                }
        } else {
            double most = -opt.pivot_tol;
            for (int j = 0; j < cols; ++j)
                if (d[j] < most) {
                    most = d[j];
                    enter = j;
                }
        }
        if (enter < 0) break;
        int leave = -1;
        double best = 0.0;
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] <= opt.pivot_tol) continue;
            const double ratio = t[i][cols] / t[i][enter];
            bool take = leave < 0 || ratio < best;
            if (!take && ratio == best)
                take = bland ? basis[i] < basis[leave]
                             : t[i][enter] > t[leave][enter];
            if (take) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) break;  // unbounded below cannot happen for a sum of artificials
        pivot(leave, enter);
        if (w < last_w - 1e-12) {
            stalled = 0;
            last_w = w;
        } else {
            ++stalled;
        }
    }

    FeasibilityResult res;
    if (w > opt.residual_tol) {
        res.feasible = false;
        res.max_residual = w;
        return res;
    }

    res.feasible = true;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = std::max(0.0, t[i][cols]);

    double r = 0.0;
    for (int i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += A[i][j] * res.x[j];
        r = std::max(r, std::abs(lhs - b[i]));
    }
    res.max_residual = r;
    return res;
}

}  // namespace byzgrad::geom
