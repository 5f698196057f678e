#pragma once

#include <vector>

namespace byzgrad::geom {

struct LpOptions {
    double pivot_tol = 1e-9;
    double residual_tol = 1e-8;
};

struct FeasibilityResult {
    bool feasible = false;
    std::vector<double> x;       // nonnegative solution of A x = b when feasible
    double max_residual = 0.0;   // ||A x - b||_inf when feasible, else phase-one gap
};

// phase-one simplex; most-negative entering with a largest-pivot ratio tie
// break, falling back to Bland's rule when the objective stalls so degenerate
// bases cannot cycle. Selection is deterministic, so every run of the same
// system pivots identically.
FeasibilityResult phase_one_feasible(const std::vector<std::vector<double>>& A,
                                     const std::vector<double>& b,
                                     const LpOptions& opt = {});

}  // namespace byzgrad::geom
