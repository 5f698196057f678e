#pragma once

#include <stdexcept>
#include <string>

namespace byzgrad {

struct invalid_params_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct size_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct not_rooted_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_resilient_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_substochastic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct too_few_neighbors_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_eta_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct infeasible_error : std::runtime_error {
    double max_residual;
    explicit infeasible_error(const std::string& msg, double residual = 0.0)
        : std::runtime_error(msg), max_residual(residual) {}
};

struct empty_intersection_error : infeasible_error {
    using infeasible_error::infeasible_error;
};

struct unsupported_family_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct empty_zero_set_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct horizon_exceeded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_invalid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct hypothesis_failed_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct incomplete_decomposition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_converged_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace byzgrad
