#include "byzgrad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "byzgrad/bounds.hpp"
#include "byzgrad/errors.hpp"
#include "byzgrad/geometry.hpp"

namespace byzgrad::metrics {

double consensus_diameter(const std::vector<std::vector<double>>& states) {
    if (states.empty()) throw invalid_params_error("no states given");
    double best = 0.0;
    for (std::size_t a = 0; a < states.size(); ++a)
        for (std::size_t b = a + 1; b < states.size(); ++b) {
            if (states[a].size() != states[b].size())
                throw size_mismatch_error("state dimension mismatch");
            double s = 0.0;
            for (std::size_t c = 0; c < states[a].size(); ++c)
                s += (states[a][c] - states[b][c]) * (states[a][c] - states[b][c]);
            best = std::max(best, std::sqrt(s));
        }
    return best;
}

bool containment_check(const std::vector<double>& v,
                       const std::vector<std::vector<double>>& hull_points, double tol) {
    if (hull_points.empty()) throw invalid_params_error("no hull points given");
    geom::PointSet ps;
    ps.dim = static_cast<int>(v.size());
    for (std::size_t k = 0; k < hull_points.size(); ++k) {
        ps.ids.push_back(static_cast<int>(k));
        ps.pts.push_back(hull_points[k]);
    }
    return geom::hull_membership(v, ps, tol).has_value();
}

ContainmentReport containment_report(const trace::RunTrace& tr, double tol) {
    ContainmentReport rep;
    const auto& normal = tr.header.normal;
    for (const auto& rec : tr.records) {
        for (const auto& [i, up] : rec.updates) {
            std::vector<std::vector<double>> pts;
            for (int k : tr.g.in[i])
                if (std::binary_search(normal.begin(), normal.end(), k)) pts.push_back(rec.x[k]);
            pts.push_back(rec.x[i]);
            ++rep.checked;
            if (!containment_check(up.v, pts, tol)) {
                rep.all_contained = false;
                if (rep.first_violation_round < 0) {
                    rep.first_violation_round = rec.t;
                    rep.first_violation_agent = i;
                }
            }
        }
    }
    return rep;
}

double optimality_gap(const trace::RunTrace& tr, const std::vector<int>& S, int T) {
    if (T < 1 || T > static_cast<int>(tr.records.size()))
        throw invalid_params_error("need 1 <= T <= recorded rounds");
    const auto xstar = obj::optimal_set(tr.objectives, S);
    const double fstar = obj::sum_value(tr.objectives, S, obj::representative_point(xstar));
    double worst = 0.0;
    for (int j : tr.header.normal) {
        std::vector<double> avg(tr.header.d, 0.0);
        for (int t = 0; t < T; ++t)
            for (int c = 0; c < tr.header.d; ++c) avg[c] += tr.records[t].x[j][c];
        for (double& c : avg) c /= static_cast<double>(T);
        worst = std::max(worst, obj::sum_value(tr.objectives, S, avg) - fstar);
    }
    return worst;
}

double optimality_gap(const trace::RunTrace& tr, int T) {
    return optimality_gap(tr, tr.header.normal, T);
}

bool WeightMatrixEstimate::complete() const {
    return std::all_of(row_decomposed.begin(), row_decomposed.end(),
                       [](char f) { return f != 0; });
}

namespace {

void append_subsets(const std::vector<int>& ids, int k, std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(ids.size());
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::vector<int> sub(k);
        for (int i = 0; i < k; ++i) sub[i] = ids[idx[i]];
        out.push_back(std::move(sub));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - (k - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

WeightMatrixEstimate reconstruct_weights(const proto::RoundRecord& rec, const graph::DiGraph& g,
                                         const std::vector<int>& byzantine, int d, int beta,
                                         double eta, double tol) {
    WeightMatrixEstimate est;
    est.t = rec.t;
    for (int i = 0; i < g.n; ++i)
        if (!std::binary_search(byzantine.begin(), byzantine.end(), i)) est.honest.push_back(i);
    const int nh = static_cast<int>(est.honest.size());
    est.w = graph::StochasticMatrix(nh);
    est.row_decomposed.assign(nh, 0);
    est.row_eta_certified.assign(nh, 0);

    auto h_index = [&](int id) {
        return static_cast<int>(
            std::lower_bound(est.honest.begin(), est.honest.end(), id) - est.honest.begin());
    };

    for (int row = 0; row < nh; ++row) {
        const int i = est.honest[row];
        auto it = rec.updates.find(i);
        if (it == rec.updates.end()) {
            est.w.at(row, row) = 1.0;
            continue;
        }
        const auto& up = it->second;
        const double share = 1.0 / (1.0 + static_cast<double>(up.a_count));
        est.w.at(row, row) = share;
        bool ok = true;
        std::vector<double> off(nh, 0.0);
        for (std::size_t j = 0; j < up.picks.size() && ok; ++j) {
            std::vector<int> honest_members;
            for (int k : up.a_sets[j])
                if (std::binary_search(est.honest.begin(), est.honest.end(), k))
                    honest_members.push_back(k);
            std::vector<std::vector<int>> candidates;
            if (static_cast<int>(honest_members.size()) >= d * beta + 1)
                append_subsets(honest_members, d * beta + 1, candidates);
            std::vector<std::pair<std::vector<int>, std::vector<double>>> found;
            for (const auto& P : candidates) {
                geom::PointSet ps;
                ps.dim = d;
                for (int k : P) {
                    ps.ids.push_back(k);
                    ps.pts.push_back(rec.x[k]);
                }
                if (auto wts = geom::hull_membership(up.picks[j].point, ps, tol))
                    found.emplace_back(P, *wts);
            }
            if (found.empty()) {
                ok = false;
                break;
            }
            const double per = share / static_cast<double>(found.size());
            for (const auto& [P, wts] : found)
                for (std::size_t k = 0; k < P.size(); ++k) off[h_index(P[k])] += per * wts[k];
        }
        if (!ok) {
            // flagged: keep an identity row so the matrix stays well formed
            for (int c = 0; c < nh; ++c) est.w.at(row, c) = c == row ? 1.0 : 0.0;
            continue;
        }
        for (int c = 0; c < nh; ++c)
            if (c != row) est.w.at(row, c) = off[c];
        est.row_decomposed[row] = 1;

        int strong = 0;
        int honest_neighbors = 0;
        for (int k : g.in[i])
            if (std::binary_search(est.honest.begin(), est.honest.end(), k)) {
                ++honest_neighbors;
                if (off[h_index(k)] >= eta - 1e-12) ++strong;
            }
        if (est.w.at(row, row) >= eta - 1e-12 && strong >= honest_neighbors - d * beta)
            est.row_eta_certified[row] = 1;
    }
    return est;
}

std::vector<WeightMatrixEstimate> reconstruct_weights(const trace::RunTrace& tr, double tol) {
    if (tr.header.update_rule != "hull-pick")
        throw invalid_params_error("weight reconstruction needs a hull-pick trace");
    std::vector<WeightMatrixEstimate> out;
    out.reserve(tr.records.size());
    for (const auto& rec : tr.records)
        out.push_back(reconstruct_weights(rec, tr.g, tr.header.byzantine, tr.header.d,
                                          tr.header.beta, tr.header.eta, tol));
    return out;
}

namespace {

graph::StochasticMatrix backward_product(const std::vector<WeightMatrixEstimate>& ws,
                                         std::size_t start, std::size_t len) {
    if (len < 1 || start + len > ws.size())
        throw invalid_params_error("window outside the reconstructed range");
    for (std::size_t k = start; k < start + len; ++k)
        if (!ws[k].complete())
            throw incomplete_decomposition_error("round " + std::to_string(ws[k].t) +
                                                 " has undecomposed rows");
    graph::StochasticMatrix p = ws[start].w;
    for (std::size_t k = start + 1; k < start + len; ++k) p = graph::multiply(ws[k].w, p);
    return p;
}

}  // namespace

double windowed_mu(const std::vector<WeightMatrixEstimate>& ws, std::size_t start,
                   std::size_t len) {
    return graph::ergodicity_coefficient(backward_product(ws, start, len));
}

PiEstimate estimate_pi(const std::vector<WeightMatrixEstimate>& ws, std::size_t tau,
                       std::size_t horizon) {
    if (tau >= ws.size()) throw invalid_params_error("tau outside the reconstructed range");
    const std::size_t len = std::min(horizon, ws.size() - tau);
    auto p = backward_product(ws, tau, len);
    PiEstimate out;
    for (int j = 0; j < p.n; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < p.n; ++i) {
            lo = std::min(lo, p.at(i, j));
            hi = std::max(hi, p.at(i, j));
        }
        out.disagreement = std::max(out.disagreement, hi - lo);
    }
    if (out.disagreement > 1e-6)
        throw not_converged_error("product rows still disagree by " +
                                  std::to_string(out.disagreement));
    out.pi = p.row(0);
    return out;
}

std::vector<int> certified_root_set(const std::vector<WeightMatrixEstimate>& ws,
                                    std::size_t start, int l) {
    if (l < 1) throw invalid_params_error("window length must be positive");
    if (start + static_cast<std::size_t>(l) > ws.size())
        throw invalid_params_error("window outside the reconstructed range");
    const auto& honest = ws[start].honest;
    const int nh = static_cast<int>(honest.size());
    std::vector<int> count(nh, 0);
    for (std::size_t k = start; k < start + static_cast<std::size_t>(l); ++k) {
        if (!ws[k].complete())
            throw incomplete_decomposition_error("round " + std::to_string(ws[k].t) +
                                                 " has undecomposed rows");
        auto sg = graph::support_graph(ws[k].w);
        for (int v : graph::roots(sg.arcs)) ++count[v];
    }
    std::vector<int> out;
    for (int v = 0; v < nh; ++v)
        if (count[v] >= nh - 1) out.push_back(honest[v]);
    return out;
}

BoundConstants bound_constants(int n_h, int kappa, double eta) {
    if (n_h < 2) throw invalid_params_error("need at least two well-behaved agents");
    if (kappa < 1 || kappa > n_h) throw invalid_params_error("kappa outside [1, n_h]");
    BoundConstants out;
    out.l = (n_h - kappa + 1) * (n_h - 2) + 1;
    out.lambda = graph::lambda_rate(eta, n_h);
    out.eta_to_l = std::pow(eta, out.l);
    return out;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& horizon_gap) {
    if (horizon_gap.size() < 3) throw invalid_params_error("need at least three horizon samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(horizon_gap.size());
    for (const auto& [t, gap] : horizon_gap) {
        if (!(t > 0)) throw invalid_params_error("horizons must be positive");
        if (!(gap > 0)) throw degenerate_data_error("converged exactly: gap is not positive");
        const double x = std::log(t), y = std::log(gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw degenerate_data_error("horizons are not distinct");
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace byzgrad::metrics
