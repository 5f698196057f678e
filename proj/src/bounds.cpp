#include "byzgrad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "byzgrad/errors.hpp"

namespace byzgrad::graph {

std::uint64_t binomial(int n, int k) {
    if (n < 0) throw invalid_params_error("binomial needs n >= 0");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
        if (r > UINT64_MAX / factor) throw std::overflow_error("binomial overflow");
        r = r * factor / static_cast<std::uint64_t>(i);
    }
    return r;
}

double eta_bound(const std::vector<int>& neighborhood_sizes, int d, int beta) {
    if (d < 1 || beta < 0) throw invalid_params_error("need d >= 1 and beta >= 0");
    if (neighborhood_sizes.empty()) throw invalid_params_error("no neighborhoods given");
    const int a_size = (d + 1) * beta + 1;
    const int b_size = d * beta + 1;
    const double picks_per_a = static_cast<double>(binomial(a_size, b_size));
    double eta = 1.0;
    for (int sz : neighborhood_sizes) {
        if (sz < a_size)
            throw too_few_neighbors_error("neighborhood smaller than (d+1)*beta + 1");
        const double a_i = static_cast<double>(binomial(sz, a_size));
        eta = std::min(eta, 1.0 / (b_size * (1.0 + a_i) * picks_per_a));
    }
    return eta;
}

double lambda_rate(double eta, int n) {
    if (!(eta > 0.0) || eta > 1.0) throw invalid_eta_error("eta must be in (0, 1]");
    if (n < 2) throw invalid_params_error("need n >= 2");
    const double p = static_cast<double>(n - 1);
    return std::pow(1.0 - std::pow(eta, p), 1.0 / p);
}

}  // namespace byzgrad::graph
