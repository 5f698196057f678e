#pragma once

#include <optional>
#include <string>
#include <vector>

#include "byzgrad/geometry.hpp"

namespace byzgrad::obj {

enum class Family { ball_hinge, quadratic, abs_deviation };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// ball_hinge: max(0, ||x - c|| - radius), flat at value 0 on the ball
// quadratic: ||x - c||^2 (no uniform subgradient bound; stress runs only)
// abs_deviation: |x - c|, dim 1
struct ObjectiveSpec {
    Family family = Family::ball_hinge;
    std::vector<double> center;
    double radius = 0.0;
    std::optional<double> bound;  // override for the subgradient norm bound

    int dim() const { return static_cast<int>(center.size()); }
};

struct ObjectiveSet {
    int dim = 0;
    std::vector<ObjectiveSpec> members;

    int size() const { return static_cast<int>(members.size()); }
};

ObjectiveSet make_objective_set(std::vector<ObjectiveSpec> members);

double value(const ObjectiveSpec& f, const std::vector<double>& x);
std::vector<double> subgradient(const ObjectiveSpec& f, const std::vector<double>& x);
double subgradient_bound(const ObjectiveSpec& f);  // +inf when unbounded
double sum_value(const ObjectiveSet& os, const std::vector<int>& subset,
                 const std::vector<double>& x);

struct Ball {
    std::vector<double> c;
    double r = 0.0;

    bool operator==(const Ball& other) const { return c == other.c && r == other.r; }
    bool operator<(const Ball& other) const {
        return c != other.c ? c < other.c : r < other.r;
    }
};

struct OptimalSet {
    enum class Kind { point, interval, ball_intersection };
    Kind kind = Kind::point;
    std::vector<double> point;
    geom::Interval interval;
    std::vector<Ball> balls;  // deduplicated, sorted
};

// argmin of the restricted sum. ball hinges: the ball intersection (error when
// empty); abs deviations: the median point or interval; quadratics: the
// centroid. mixed families are refused.
OptimalSet optimal_set(const ObjectiveSet& os, const std::vector<int>& subset);
OptimalSet optimal_set(const ObjectiveSet& os);

// exact for points, intervals and dim-1 ball systems; dim-2 ball systems are
// compared by support values and support points on 64 fixed directions; ball
// systems beyond dim 2 are refused unless the deduplicated ball sets coincide
bool optimal_set_equal(const OptimalSet& a, const OptimalSet& b, double tol = 1e-9);

struct RedundancyReport {
    bool redundant = false;
    // two (n-k)-subsets with different argmins, when not redundant
    std::optional<std::pair<std::vector<int>, std::vector<int>>> witness;
};

RedundancyReport check_k_redundant(const ObjectiveSet& os, int k, double tol = 1e-9);

// copies identical blocks of the distinct ball hinges; agent i holds
// distinct[i mod |distinct|]. requires a common intersection with interior.
// the result is (copies - 1)-redundant.
ObjectiveSet make_replicated_set(const std::vector<ObjectiveSpec>& distinct, int copies);

double distance_to_optimal(const std::vector<double>& x, const OptimalSet& s);

// deterministic member of the optimal set, for gap evaluation
std::vector<double> representative_point(const OptimalSet& s);

ObjectiveSet parse_objectives_json(const std::string& text);
ObjectiveSet load_objectives_json(const std::string& path);
std::string objectives_to_json(const ObjectiveSet& os);

}  // namespace byzgrad::obj
