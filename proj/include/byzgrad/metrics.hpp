#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "byzgrad/matrix.hpp"
#include "byzgrad/trace.hpp"

namespace byzgrad::metrics {

// max pairwise distance between the given state vectors
double consensus_diameter(const std::vector<std::vector<double>>& states);

// does v lie in the hull of the given points (well-behaved closed-neighborhood
// states) within tol
bool containment_check(const std::vector<double>& v,
                       const std::vector<std::vector<double>>& hull_points, double tol = 1e-7);

struct ContainmentReport {
    bool all_contained = true;
    int first_violation_round = -1;
    int first_violation_agent = -1;
    long checked = 0;
};

// containment of every recorded v_i in the hull of the time-t states of its
// well-behaved closed in-neighborhood, across the whole trace
ContainmentReport containment_report(const trace::RunTrace& tr, double tol = 1e-7);

// max over normal agents j of sum_{i in S} f_i(running average of x_j through
// round T-1) minus the same sum at the argmin of the S-restricted objective
double optimality_gap(const trace::RunTrace& tr, const std::vector<int>& S, int T);
double optimality_gap(const trace::RunTrace& tr, int T);  // S = all normal agents

// one reconstructed mixing matrix: row i of w gives the convex weights over
// the well-behaved agents that produced v_i this round
struct WeightMatrixEstimate {
    int t = 0;
    std::vector<int> honest;  // row/column order
    graph::StochasticMatrix w;
    std::vector<char> row_decomposed;
    std::vector<char> row_eta_certified;

    bool complete() const;
};

// observer-side diagnostic: expresses each recorded pick as a convex
// combination over hulls of honest senders only, then assembles the implied
// row weights. rows where no honest decomposition is found within tol are
// flagged, never fatal. eta certification marks rows whose diagonal and at
// least |N_i ∩ H| - d*beta off-diagonal entries reach eta.
WeightMatrixEstimate reconstruct_weights(const proto::RoundRecord& rec, const graph::DiGraph& g,
                                         const std::vector<int>& byzantine, int d, int beta,
                                         double eta, double tol = 1e-7);

std::vector<WeightMatrixEstimate> reconstruct_weights(const trace::RunTrace& tr,
                                                      double tol = 1e-7);

// ergodicity coefficient of the backward product w[start+len-1] ... w[start];
// every round in the window must be fully decomposed
double windowed_mu(const std::vector<WeightMatrixEstimate>& ws, std::size_t start,
                   std::size_t len);

struct PiEstimate {
    std::vector<double> pi;
    double disagreement = 0.0;  // max row spread of the backward product
};

// approximates the absolute probability vector at tau from the backward
// product over up to `horizon` following rounds; refuses when the product
// rows still disagree by more than 1e-6
PiEstimate estimate_pi(const std::vector<WeightMatrixEstimate>& ws, std::size_t tau,
                       std::size_t horizon);

// agents that are roots of at least n_H - 1 of the l support graphs in the
// window starting at `start`; their product columns are positive, so their
// pi entries carry the eta^l lower bound
std::vector<int> certified_root_set(const std::vector<WeightMatrixEstimate>& ws,
                                    std::size_t start, int l);

struct BoundConstants {
    int l = 0;
    double lambda = 0.0;
    double eta_to_l = 0.0;
};

// l = (n_H - kappa + 1)(n_H - 2) + 1, lambda = (1 - eta^(n_H - 1))^(1/(n_H - 1))
BoundConstants bound_constants(int n_h, int kappa, double eta);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// least-squares line through (log T, log gap); refuses non-positive gaps
RateFit rate_fit(const std::vector<std::pair<double, double>>& horizon_gap);

}  // namespace byzgrad::metrics
