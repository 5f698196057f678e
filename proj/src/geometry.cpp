#include "byzgrad/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "byzgrad/errors.hpp"

namespace byzgrad::geom {

namespace {

void append_subsets(const std::vector<int>& pool, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    const int n = static_cast<int>(pool.size());
    while (true) {
        std::vector<int> sub(k);
        for (int i = 0; i < k; ++i) sub[i] = pool[idx[i]];
        out.push_back(std::move(sub));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - (k - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

SubsetFamilies subset_families(const std::vector<int>& neighbor_ids, int d, int beta) {
    if (d < 1 || beta < 0) throw invalid_params_error("need d >= 1 and beta >= 0");
    const int a_size = (d + 1) * beta + 1;
    const int b_size = d * beta + 1;
    std::vector<int> ids = neighbor_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (static_cast<int>(ids.size()) < a_size)
        throw too_few_neighbors_error("need at least (d+1)*beta + 1 distinct neighbors");

    SubsetFamilies fam;
    append_subsets(ids, a_size, fam.a_sets);
    fam.b_sets.resize(fam.a_sets.size());
    for (std::size_t i = 0; i < fam.a_sets.size(); ++i)
        append_subsets(fam.a_sets[i], b_size, fam.b_sets[i]);
    return fam;
}

std::optional<std::vector<double>> hull_membership(const std::vector<double>& x,
                                                   const PointSet& ps, double tol) {
    const int d = ps.dim;
    const int p = static_cast<int>(ps.pts.size());
    if (p == 0) return std::nullopt;
    if (static_cast<int>(x.size()) != d) throw size_mismatch_error("point dimension mismatch");

    // scale rows so the phase-one gap measures geometry at the given tol even
    // for large coordinates
    std::vector<double> scale(d, 1.0);
    for (int c = 0; c < d; ++c) {
        double m = std::abs(x[c]);
        for (const auto& pt : ps.pts) m = std::max(m, std::abs(pt[c]));
        if (m > 1.0) scale[c] = 1.0 / m;
    }

    std::vector<std::vector<double>> A(d + 1, std::vector<double>(p, 0.0));
    std::vector<double> b(d + 1, 0.0);
    for (int c = 0; c < d; ++c) {
        for (int j = 0; j < p; ++j) A[c][j] = ps.pts[j][c] * scale[c];
        b[c] = x[c] * scale[c];
    }
    for (int j = 0; j < p; ++j) A[d][j] = 1.0;
    b[d] = 1.0;

    LpOptions opt;
    opt.residual_tol = tol;
    auto res = phase_one_feasible(A, b, opt);
    if (!res.feasible) return std::nullopt;
    // snap solver dust so the result is a genuine convex combination
    double s = 0.0;
    for (double& w : res.x) {
        if (w < 0.0) w = 0.0;
        s += w;
    }
    if (s > 0.0)
        for (double& w : res.x) w /= s;
    return res.x;
}

Interval intersect_intervals(const HullSystem& hs) {
    if (hs.dim != 1) throw invalid_params_error("interval intersection needs dim 1");
    if (hs.hulls.empty()) throw invalid_params_error("no hulls given");
    double lo = -HUGE_VAL, hi = HUGE_VAL;
    for (const auto& h : hs.hulls) {
        if (h.pts.empty()) throw invalid_params_error("empty hull");
        double a = HUGE_VAL, b = -HUGE_VAL;
        for (const auto& p : h.pts) {
            a = std::min(a, p[0]);
            b = std::max(b, p[0]);
        }
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    }
    if (lo > hi) throw empty_intersection_error("interval intersection is empty", lo - hi);
    return Interval{lo, hi};
}

namespace {

PickResult pick_interval_midpoint(const HullSystem& hs) {
    Interval iv = intersect_intervals(hs);
    const double y = 0.5 * (iv.lo + iv.hi);
    PickResult res;
    res.point = {y};
    res.cert.hull_weights.reserve(hs.hulls.size());
    for (const auto& h : hs.hulls) {
        // express y over the hull's extreme points
        std::size_t ilo = 0, ihi = 0;
        for (std::size_t j = 1; j < h.pts.size(); ++j) {
            if (h.pts[j][0] < h.pts[ilo][0]) ilo = j;
            if (h.pts[j][0] > h.pts[ihi][0]) ihi = j;
        }
        std::vector<double> w(h.pts.size(), 0.0);
        const double a = h.pts[ilo][0], b = h.pts[ihi][0];
        if (b - a <= 0.0) {
            w[ilo] = 1.0;
        } else {
            const double th = (b - y) / (b - a);
            w[ilo] = th;
            w[ihi] += 1.0 - th;
        }
        res.cert.hull_weights.push_back(std::move(w));
    }
    res.cert.max_residual = certificate_residual(hs, res);
    return res;
}

PickResult pick_lp(const HullSystem& hs, const LpOptions& opt) {
    const int d = hs.dim;
    const int H = static_cast<int>(hs.hulls.size());
    int cols = 2 * d;
    std::vector<int> offset(H);
    for (int h = 0; h < H; ++h) {
        offset[h] = cols;
        cols += static_cast<int>(hs.hulls[h].pts.size());
    }

    double m = 1.0;
    for (const auto& h : hs.hulls)
        for (const auto& p : h.pts)
            for (double v : p) m = std::max(m, std::abs(v));
    const double scale = 1.0 / m;

    const int rows = H * (d + 1);
    std::vector<std::vector<double>> A(rows, std::vector<double>(cols, 0.0));
    std::vector<double> b(rows, 0.0);
    for (int h = 0; h < H; ++h) {
        const auto& hull = hs.hulls[h];
        for (int c = 0; c < d; ++c) {
            auto& row = A[h * (d + 1) + c];
            row[c] = 1.0;
            row[d + c] = -1.0;
            for (std::size_t j = 0; j < hull.pts.size(); ++j)
                row[offset[h] + j] = -hull.pts[j][c] * scale;
        }
        auto& srow = A[h * (d + 1) + d];
        for (std::size_t j = 0; j < hull.pts.size(); ++j) srow[offset[h] + j] = 1.0;
        b[h * (d + 1) + d] = 1.0;
    }

    auto res = phase_one_feasible(A, b, opt);
    if (!res.feasible)
        throw infeasible_error("hull system has empty intersection", res.max_residual);

    PickResult out;
    out.point.assign(d, 0.0);
    for (int c = 0; c < d; ++c) out.point[c] = (res.x[c] - res.x[d + c]) / scale;
    out.cert.hull_weights.resize(H);
    for (int h = 0; h < H; ++h) {
        const auto& hull = hs.hulls[h];
        auto& w = out.cert.hull_weights[h];
        w.assign(hull.pts.size(), 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < hull.pts.size(); ++j) {
            w[j] = res.x[offset[h] + j];
            sum += w[j];
        }
        if (sum > 0.0)
            for (auto& v : w) v /= sum;
    }
    out.cert.max_residual = certificate_residual(hs, out);
    if (out.cert.max_residual > opt.residual_tol * std::max(1.0, m))
        throw infeasible_error("pick residual above tolerance", out.cert.max_residual);
    return out;
}

}  // namespace

PickResult pick_intersection_point(const HullSystem& hs, PickPolicy policy,
                                   const LpOptions& opt) {
    if (hs.hulls.empty()) throw invalid_params_error("no hulls given");
    for (const auto& h : hs.hulls) {
        if (h.dim != hs.dim) throw size_mismatch_error("hull dimension mismatch");
        if (h.pts.empty()) throw invalid_params_error("empty hull");
        for (const auto& p : h.pts)
            if (static_cast<int>(p.size()) != hs.dim)
                throw size_mismatch_error("point dimension mismatch");
    }
    if (policy == PickPolicy::interval_midpoint && hs.dim != 1)
        throw invalid_params_error("interval midpoint policy needs dim 1");
    const bool midpoint = policy == PickPolicy::interval_midpoint ||
                          (policy == PickPolicy::automatic && hs.dim == 1);
    return midpoint ? pick_interval_midpoint(hs) : pick_lp(hs, opt);
}

double certificate_residual(const HullSystem& hs, const PickResult& r) {
    double worst = 0.0;
    for (std::size_t h = 0; h < hs.hulls.size(); ++h) {
        const auto& hull = hs.hulls[h];
        const auto& w = r.cert.hull_weights[h];
        double sum = 0.0;
        std::vector<double> rec(hs.dim, 0.0);
        for (std::size_t j = 0; j < hull.pts.size(); ++j) {
            if (w[j] < 0.0) worst = std::max(worst, -w[j]);
            sum += w[j];
            for (int c = 0; c < hs.dim; ++c) rec[c] += w[j] * hull.pts[j][c];
        }
        worst = std::max(worst, std::abs(sum - 1.0));
        for (int c = 0; c < hs.dim; ++c) worst = std::max(worst, std::abs(rec[c] - r.point[c]));
    }
    return worst;
}

}  // namespace byzgrad::geom
