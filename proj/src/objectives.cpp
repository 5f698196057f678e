#include "byzgrad/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "byzgrad/errors.hpp"

namespace byzgrad::obj {

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> diff(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

double coord_scale(const std::vector<Ball>& balls) {
    double m = 1.0;
    for (const auto& b : balls) {
        for (double c : b.c) m = std::max(m, std::abs(c));
        m = std::max(m, b.r);
    }
    return m;
}

double ball_margin(const std::vector<double>& x, const std::vector<Ball>& balls) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& b : balls) margin = std::min(margin, b.r - norm(diff(x, b.c)));
    return margin;
}

// candidate points whose best margin decides emptiness for planar disk
// systems: disk centers, circle pair intersections, and chord midpoints
std::vector<std::vector<double>> planar_candidates(const std::vector<Ball>& balls) {
    std::vector<std::vector<double>> cand;
    for (const auto& b : balls) cand.push_back(b.c);
    const double scale = coord_scale(balls);
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            const auto& a = balls[i];
            const auto& b = balls[j];
            const double dx = b.c[0] - a.c[0], dy = b.c[1] - a.c[1];
            const double dd = std::hypot(dx, dy);
            if (dd <= 1e-15 * scale) continue;
            const double t = (dd * dd + a.r * a.r - b.r * b.r) / (2.0 * dd);
            double h2 = a.r * a.r - t * t;
            if (h2 < -1e-12 * scale * scale) continue;
            h2 = std::max(h2, 0.0);
            const double h = std::sqrt(h2);
            const double bx = a.c[0] + t * dx / dd, by = a.c[1] + t * dy / dd;
            const double px = -dy / dd, py = dx / dd;
            cand.push_back({bx + h * px, by + h * py});
            cand.push_back({bx - h * px, by - h * py});
            cand.push_back({bx, by});
        }
    return cand;
}

// best achievable margin over the candidate points; >= -tol means nonempty
double planar_best_margin(const std::vector<Ball>& balls) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : planar_candidates(balls)) best = std::max(best, ball_margin(x, balls));
    return best;
}

std::vector<double> centroid_of_centers(const std::vector<Ball>& balls) {
    std::vector<double> c(balls[0].c.size(), 0.0);
    for (const auto& b : balls)
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c[i];
    for (auto& v : c) v /= static_cast<double>(balls.size());
    return c;
}

std::vector<double> project_ball(const std::vector<double>& x, const Ball& b) {
    auto d = diff(x, b.c);
    const double n = norm(d);
    if (n <= b.r) return x;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = b.c[i] + d[i] * (b.r / n);
    return y;
}

// dykstra sweeps; converges to the projection of x0 onto the intersection
std::vector<double> project_intersection(const std::vector<double>& x0,
                                         const std::vector<Ball>& balls, double tol,
                                         int max_sweeps = 20000) {
    std::vector<double> x = x0;
    std::vector<std::vector<double>> corr(balls.size(), std::vector<double>(x0.size(), 0.0));
    const double scale = coord_scale(balls);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t i = 0; i < balls.size(); ++i) {
            std::vector<double> z(x.size());
            for (std::size_t c = 0; c < x.size(); ++c) z[c] = x[c] + corr[i][c];
            auto y = project_ball(z, balls[i]);
            for (std::size_t c = 0; c < x.size(); ++c) {
                corr[i][c] = z[c] - y[c];
                moved = std::max(moved, std::abs(y[c] - x[c]));
                x[c] = y[c];
            }
        }
        if (moved <= tol * scale && ball_margin(x, balls) >= -10 * tol * scale) break;
    }
    return x;
}

bool balls_nonempty(const std::vector<Ball>& balls, double tol) {
    const int d = static_cast<int>(balls[0].c.size());
    const double scale = coord_scale(balls);
    if (d == 1) {
        double lo = -HUGE_VAL, hi = HUGE_VAL;
        for (const auto& b : balls) {
            lo = std::max(lo, b.c[0] - b.r);
            hi = std::min(hi, b.c[0] + b.r);
        }
        return lo <= hi + tol * scale;
    }
    if (d == 2) return planar_best_margin(balls) >= -tol * scale;
    auto x = project_intersection(centroid_of_centers(balls), balls, 1e-12);
    return ball_margin(x, balls) >= -tol * scale;
}

// support value and maximizer of a nonempty planar disk intersection along u:
// the maximizer is a single-disk support point or a circle pair intersection
std::pair<double, std::vector<double>> planar_support(const std::vector<double>& u,
                                                      const std::vector<Ball>& balls,
                                                      double tol) {
    const double scale = coord_scale(balls);
    const double feas = tol * scale;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> arg;
    auto consider = [&](const std::vector<double>& p) {
        if (ball_margin(p, balls) < -feas) return;
        const double v = p[0] * u[0] + p[1] * u[1];
        if (v > best) {
            best = v;
            arg = p;
        }
    };
    for (const auto& b : balls) consider({b.c[0] + b.r * u[0], b.c[1] + b.r * u[1]});
    for (const auto& p : planar_candidates(balls)) consider(p);
    if (arg.empty()) throw empty_zero_set_error("support of an empty ball system");
    return {best, arg};
}

std::vector<Ball> dedupe(std::vector<Ball> balls) {
    std::sort(balls.begin(), balls.end());
    balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
    return balls;
}

geom::Interval balls_to_interval(const std::vector<Ball>& balls) {
    double lo = -HUGE_VAL, hi = HUGE_VAL;
    for (const auto& b : balls) {
        lo = std::max(lo, b.c[0] - b.r);
        hi = std::min(hi, b.c[0] + b.r);
    }
    return geom::Interval{lo, hi};
}

OptimalSet normalize(const OptimalSet& s) {
    OptimalSet out = s;
    if (out.kind == OptimalSet::Kind::ball_intersection && !out.balls.empty() &&
        out.balls[0].c.size() == 1) {
        out.kind = OptimalSet::Kind::interval;
        out.interval = balls_to_interval(out.balls);
        out.balls.clear();
    }
    if (out.kind == OptimalSet::Kind::interval && out.interval.hi <= out.interval.lo) {
        out.kind = OptimalSet::Kind::point;
        out.point = {0.5 * (out.interval.lo + out.interval.hi)};
    }
    return out;
}

int descriptor_dim(const OptimalSet& s) {
    switch (s.kind) {
        case OptimalSet::Kind::point:
            return static_cast<int>(s.point.size());
        case OptimalSet::Kind::interval:
            return 1;
        case OptimalSet::Kind::ball_intersection:
            return static_cast<int>(s.balls[0].c.size());
    }
    return 0;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::ball_hinge:
            return "ball-hinge";
        case Family::quadratic:
            return "quadratic";
        case Family::abs_deviation:
            return "abs-deviation";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "ball-hinge") return Family::ball_hinge;
    if (name == "quadratic") return Family::quadratic;
    if (name == "abs-deviation") return Family::abs_deviation;
    throw invalid_params_error("unknown objective family: " + name);
}

ObjectiveSet make_objective_set(std::vector<ObjectiveSpec> members) {
    if (members.empty()) throw invalid_params_error("objective set is empty");
    const int dim = members[0].dim();
    if (dim < 1) throw invalid_params_error("objectives need dimension at least 1");
    for (const auto& m : members) {
        if (m.dim() != dim) throw size_mismatch_error("objective dimension mismatch");
        if (m.family == Family::ball_hinge && !(m.radius > 0.0))
            throw invalid_params_error("ball hinge needs radius > 0");
        if (m.family == Family::abs_deviation && dim != 1)
            throw invalid_params_error("abs deviation is one dimensional");
    }
    return ObjectiveSet{dim, std::move(members)};
}

double value(const ObjectiveSpec& f, const std::vector<double>& x) {
    if (x.size() != f.center.size()) throw size_mismatch_error("point dimension mismatch");
    const double dist = norm(diff(x, f.center));
    switch (f.family) {
        case Family::ball_hinge:
            return std::max(0.0, dist - f.radius);
        case Family::quadratic:
            return dist * dist;
        case Family::abs_deviation:
            return dist;
    }
    return 0.0;
}

std::vector<double> subgradient(const ObjectiveSpec& f, const std::vector<double>& x) {
    if (x.size() != f.center.size()) throw size_mismatch_error("point dimension mismatch");
    auto d = diff(x, f.center);
    const double dist = norm(d);
    std::vector<double> g(x.size(), 0.0);
    switch (f.family) {
        case Family::ball_hinge:
            if (dist <= f.radius || dist == 0.0) return g;  // 0 inside and on the boundary
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = d[i] / dist;
            return g;
        case Family::quadratic:
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * d[i];
            return g;
        case Family::abs_deviation:
            if (dist == 0.0) return g;
            g[0] = x[0] > f.center[0] ? 1.0 : -1.0;
            return g;
    }
    return g;
}

double subgradient_bound(const ObjectiveSpec& f) {
    if (f.bound) return *f.bound;
    switch (f.family) {
        case Family::ball_hinge:
        case Family::abs_deviation:
            return 1.0;
        case Family::quadratic:
            return std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::infinity();
}

double sum_value(const ObjectiveSet& os, const std::vector<int>& subset,
                 const std::vector<double>& x) {
    double s = 0.0;
    for (int i : subset) s += value(os.members.at(i), x);
    return s;
}

OptimalSet optimal_set(const ObjectiveSet& os) {
    std::vector<int> all(os.members.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return optimal_set(os, all);
}

OptimalSet optimal_set(const ObjectiveSet& os, const std::vector<int>& subset) {
    if (subset.empty()) throw invalid_params_error("subset is empty");
    std::vector<int> idx = subset;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx)
        if (i < 0 || i >= os.size()) throw invalid_params_error("subset index out of range");

    const Family fam = os.members[idx[0]].family;
    for (int i : idx)
        if (os.members[i].family != fam)
            throw unsupported_family_error("mixed families have no closed-form argmin here");

    OptimalSet out;
    if (fam == Family::quadratic) {
        out.kind = OptimalSet::Kind::point;
        out.point.assign(os.dim, 0.0);
        for (int i : idx)
            for (int c = 0; c < os.dim; ++c) out.point[c] += os.members[i].center[c];
        for (auto& v : out.point) v /= static_cast<double>(idx.size());
        return out;
    }
    if (fam == Family::abs_deviation) {
        std::vector<double> cs;
        for (int i : idx) cs.push_back(os.members[i].center[0]);
        std::sort(cs.begin(), cs.end());
        const std::size_t n = cs.size();
        if (n % 2 == 1) {
            out.kind = OptimalSet::Kind::point;
            out.point = {cs[n / 2]};
        } else {
            out.kind = OptimalSet::Kind::interval;
            out.interval = geom::Interval{cs[n / 2 - 1], cs[n / 2]};
            if (out.interval.hi <= out.interval.lo) {
                out.kind = OptimalSet::Kind::point;
                out.point = {out.interval.lo};
            }
        }
        return out;
    }

    std::vector<Ball> balls;
    for (int i : idx) balls.push_back(Ball{os.members[i].center, os.members[i].radius});
    balls = dedupe(std::move(balls));
    if (!balls_nonempty(balls, 1e-9))
        throw empty_zero_set_error("ball hinges with empty common ball intersection");
    if (os.dim == 1) {
        out.kind = OptimalSet::Kind::interval;
        out.interval = balls_to_interval(balls);
        if (out.interval.hi <= out.interval.lo) {
            out.kind = OptimalSet::Kind::point;
            out.point = {0.5 * (out.interval.lo + out.interval.hi)};
        }
        return out;
    }
    out.kind = OptimalSet::Kind::ball_intersection;
    out.balls = std::move(balls);
    return out;
}

bool optimal_set_equal(const OptimalSet& a_raw, const OptimalSet& b_raw, double tol) {
    const OptimalSet a = normalize(a_raw);
    const OptimalSet b = normalize(b_raw);
    if (descriptor_dim(a) != descriptor_dim(b))
        throw size_mismatch_error("descriptor dimension mismatch");
    using K = OptimalSet::Kind;

    if (a.kind == K::point && b.kind == K::point) {
        for (std::size_t i = 0; i < a.point.size(); ++i)
            if (std::abs(a.point[i] - b.point[i]) > tol) return false;
        return true;
    }
    if (a.kind == K::interval && b.kind == K::interval)
        return std::abs(a.interval.lo - b.interval.lo) <= tol &&
               std::abs(a.interval.hi - b.interval.hi) <= tol;
    if ((a.kind == K::interval && b.kind == K::point) ||
        (a.kind == K::point && b.kind == K::interval)) {
        const auto& iv = a.kind == K::interval ? a.interval : b.interval;
        const double p = a.kind == K::point ? a.point[0] : b.point[0];
        return iv.hi - iv.lo <= tol && std::abs(0.5 * (iv.lo + iv.hi) - p) <= tol;
    }

    if (a.kind == K::ball_intersection && b.kind == K::ball_intersection) {
        if (a.balls == b.balls) return true;
        const int dim = descriptor_dim(a);
        if (dim != 2)
            throw unsupported_family_error(
                "ball intersection equality beyond dim 2 needs identical ball sets");
        const double scale = std::max(coord_scale(a.balls), coord_scale(b.balls));
        const double eps = std::max(tol, 1e-9) + 1e-12 * scale;
        for (int k = 0; k < 64; ++k) {
            const double ang = 2.0 * M_PI * k / 64.0;
            const std::vector<double> u{std::cos(ang), std::sin(ang)};
            auto [ha, pa] = planar_support(u, a.balls, 1e-9);
            auto [hb, pb] = planar_support(u, b.balls, 1e-9);
            if (std::abs(ha - hb) > eps) return false;
            // mutual containment of the support points
            if (ball_margin(pa, b.balls) < -eps || ball_margin(pb, a.balls) < -eps)
                return false;
        }
        return true;
    }

    // ball system against a point: supports must collapse onto the point
    const OptimalSet& bs = a.kind == K::ball_intersection ? a : b;
    const OptimalSet& pt = a.kind == K::ball_intersection ? b : a;
    if (pt.kind != K::point)
        throw unsupported_family_error("cannot compare these descriptor kinds");
    const int dim = descriptor_dim(bs);
    if (dim != 2)
        throw unsupported_family_error(
            "ball intersection equality beyond dim 2 needs identical ball sets");
    const double scale = coord_scale(bs.balls);
    const double eps = std::max(tol, 1e-9) + 1e-12 * scale;
    for (int k = 0; k < 64; ++k) {
        const double ang = 2.0 * M_PI * k / 64.0;
        const std::vector<double> u{std::cos(ang), std::sin(ang)};
        auto [h, p] = planar_support(u, bs.balls, 1e-9);
        (void)p;
        if (std::abs(h - (u[0] * pt.point[0] + u[1] * pt.point[1])) > eps) return false;
    }
    return true;
}

RedundancyReport check_k_redundant(const ObjectiveSet& os, int k, double tol) {
    const int n = os.size();
    if (k < 0 || k >= n) throw invalid_params_error("need 0 <= k <= n - 1");
    const int m = n - k;
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::vector<int> first = idx;
    OptimalSet ref = optimal_set(os, first);
    RedundancyReport rep;
    rep.redundant = true;
    while (true) {
        int i = m - 1;
        while (i >= 0 && idx[i] == n - (m - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
        if (!optimal_set_equal(ref, optimal_set(os, idx), tol)) {
            rep.redundant = false;
            rep.witness = std::make_pair(first, idx);
            return rep;
        }
    }
    return rep;
}

ObjectiveSet make_replicated_set(const std::vector<ObjectiveSpec>& distinct, int copies) {
    if (distinct.empty()) throw invalid_params_error("no distinct objectives given");
    if (copies < 1) throw invalid_params_error("need at least one copy");
    std::vector<Ball> balls;
    for (const auto& m : distinct) {
        if (m.family != Family::ball_hinge)
            throw unsupported_family_error("replication guarantee covers ball hinges only");
        balls.push_back(Ball{m.center, m.radius});
    }
    balls = dedupe(std::move(balls));
    // interior, not mere contact: a margin at least 1e-9 above the boundary
    const int dim = static_cast<int>(balls[0].c.size());
    double margin;
    if (dim == 1) {
        auto iv = balls_to_interval(balls);
        margin = 0.5 * (iv.hi - iv.lo);
        if (iv.hi < iv.lo) margin = iv.hi - iv.lo;
    } else if (dim == 2) {
        margin = planar_best_margin(balls);
    } else {
        auto x = project_intersection(centroid_of_centers(balls), balls, 1e-12);
        margin = ball_margin(x, balls);
    }
    if (!(margin > 1e-9))
        throw empty_zero_set_error("distinct balls need a common intersection with interior");

    std::vector<ObjectiveSpec> members;
    members.reserve(static_cast<std::size_t>(copies) * distinct.size());
    for (int c = 0; c < copies; ++c)
        for (const auto& m : distinct) members.push_back(m);
    return make_objective_set(std::move(members));
}

double distance_to_optimal(const std::vector<double>& x, const OptimalSet& s) {
    switch (s.kind) {
        case OptimalSet::Kind::point:
            return norm(diff(x, s.point));
        case OptimalSet::Kind::interval: {
            if (x.size() != 1) throw size_mismatch_error("interval descriptor is dim 1");
            if (x[0] < s.interval.lo) return s.interval.lo - x[0];
            if (x[0] > s.interval.hi) return x[0] - s.interval.hi;
            return 0.0;
        }
        case OptimalSet::Kind::ball_intersection: {
            auto p = project_intersection(x, s.balls, 1e-12);
            return norm(diff(x, p));
        }
    }
    return 0.0;
}

std::vector<double> representative_point(const OptimalSet& s) {
    switch (s.kind) {
        case OptimalSet::Kind::point:
            return s.point;
        case OptimalSet::Kind::interval:
            return {0.5 * (s.interval.lo + s.interval.hi)};
        case OptimalSet::Kind::ball_intersection:
            return project_intersection(centroid_of_centers(s.balls), s.balls, 1e-12);
    }
    return {};
}

namespace {

ObjectiveSpec spec_from_json(const nlohmann::json& j) {
    ObjectiveSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    const auto& c = j.at("center");
    if (c.is_number())
        spec.center = {c.get<double>()};
    else
        spec.center = c.get<std::vector<double>>();
    if (spec.family == Family::ball_hinge) spec.radius = j.at("radius").get<double>();
    if (j.contains("bound")) spec.bound = j["bound"].get<double>();
    return spec;
}

}  // namespace

ObjectiveSet parse_objectives_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("bad objectives json: ") + e.what());
    }
    if (!j.is_array()) throw io_error("objectives json must be an array");
    std::vector<ObjectiveSpec> members;
    try {
        for (const auto& item : j) members.push_back(spec_from_json(item));
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("bad objective entry: ") + e.what());
    }
    return make_objective_set(std::move(members));
}

ObjectiveSet load_objectives_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open objectives file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_objectives_json(ss.str());
}

std::string objectives_to_json(const ObjectiveSet& os) {
    auto arr = nlohmann::json::array();
    for (const auto& m : os.members) {
        nlohmann::json j;
        j["family"] = family_name(m.family);
        j["center"] = m.center;
        if (m.family == Family::ball_hinge) j["radius"] = m.radius;
        if (m.bound) j["bound"] = *m.bound;
        arr.push_back(j);
    }
    return arr.dump();
}

}  // namespace byzgrad::obj
