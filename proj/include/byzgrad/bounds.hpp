#pragma once

#include <cstdint>
#include <vector>

namespace byzgrad::graph {

// exact binomial coefficient; throws std::overflow_error past 64 bits
std::uint64_t binomial(int n, int k);

// worst-case mixing weight floor: with neighborhoods of the given sizes and
// per-pick trimming parameters d, beta, every agent's averaging step keeps
// weight at least eta on itself and on enough honest sources.
// eta = min_i 1 / ((d*beta + 1) * (1 + a_i) * C((d+1)*beta + 1, d*beta + 1))
// with a_i = C(|N_i|, (d+1)*beta + 1).
double eta_bound(const std::vector<int>& neighborhood_sizes, int d, int beta);

// per-step contraction factor (1 - eta^(n-1))^(1/(n-1)) for products of n x n
// averaging matrices with floor eta
double lambda_rate(double eta, int n);

}  // namespace byzgrad::graph
