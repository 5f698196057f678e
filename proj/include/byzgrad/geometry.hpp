#pragma once

#include <optional>
#include <vector>

#include "byzgrad/simplex.hpp"

namespace byzgrad::geom {

// finite point set tagged with source ids; one hull = conv(pts)
struct PointSet {
    int dim = 0;
    std::vector<int> ids;                    // parallel to pts
    std::vector<std::vector<double>> pts;
};

struct HullSystem {
    int dim = 0;
    std::vector<PointSet> hulls;
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

// trimming families for one neighborhood: the a_sets are the
// ((d+1)*beta + 1)-subsets of the neighbor ids and, for each, b_sets holds its
// (d*beta + 1)-subsets; both in lexicographic order over the sorted ids
struct SubsetFamilies {
    std::vector<std::vector<int>> a_sets;
    std::vector<std::vector<std::vector<int>>> b_sets;
};

SubsetFamilies subset_families(const std::vector<int>& neighbor_ids, int d, int beta);

// convex weights placing x in conv(ps) within tol, or nullopt
std::optional<std::vector<double>> hull_membership(const std::vector<double>& x,
                                                   const PointSet& ps, double tol = 1e-8);

// dim-1 system only; throws empty_intersection_error when max lo > min hi
Interval intersect_intervals(const HullSystem& hs);

enum class PickPolicy { automatic, lp, interval_midpoint };

struct PickCertificate {
    std::vector<std::vector<double>> hull_weights;  // per hull, per point
    double max_residual = 0.0;
};

struct PickResult {
    std::vector<double> point;
    PickCertificate cert;
};

// deterministic point in the intersection of every hull. automatic policy
// takes the interval midpoint for dim 1 and the phase-one simplex solution
// otherwise. throws infeasible_error when the hulls do not intersect.
PickResult pick_intersection_point(const HullSystem& hs,
                                   PickPolicy policy = PickPolicy::automatic,
                                   const LpOptions& opt = {});

// max over hulls and coordinates of |sum_p w_p x_p - point|, plus weight-sum
// drift; recomputed from scratch for audits
double certificate_residual(const HullSystem& hs, const PickResult& r);

}  // namespace byzgrad::geom
