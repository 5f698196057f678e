#include "byzgrad/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "byzgrad/errors.hpp"
#include "byzgrad/rng.hpp"

namespace byzgrad::proto {

StepSchedule harmonic_schedule(double a0) {
    if (!(a0 > 0.0)) throw invalid_params_error("harmonic schedule needs a0 > 0");
    StepSchedule s;
    s.kind = ScheduleKind::harmonic;
    s.a0 = a0;
    return s;
}

StepSchedule fixed_schedule(int horizon) {
    if (horizon < 1) throw invalid_params_error("fixed schedule needs horizon >= 1");
    StepSchedule s;
    s.kind = ScheduleKind::fixed;
    s.horizon = horizon;
    return s;
}

double stepsize(const StepSchedule& s, int t) {
    if (t < 0) throw invalid_params_error("round index is negative");
    switch (s.kind) {
        case ScheduleKind::harmonic:
            return s.a0 / static_cast<double>(t + 1);
        case ScheduleKind::fixed:
            if (t >= s.horizon) throw horizon_exceeded_error("fixed stepsize past its horizon");
            return 1.0 / std::sqrt(static_cast<double>(s.horizon));
    }
    return 0.0;
}

std::string attack_name(AttackKind k) {
    switch (k) {
        case AttackKind::constant_value:
            return "constant";
        case AttackKind::uniform_noise:
            return "uniform-noise";
        case AttackKind::target_pull:
            return "target-pull";
        case AttackKind::coordinated:
            return "coordinated";
        case AttackKind::split_brain:
            return "split-brain";
    }
    return "?";
}

AttackKind attack_from_name(const std::string& name) {
    if (name == "constant") return AttackKind::constant_value;
    if (name == "uniform-noise") return AttackKind::uniform_noise;
    if (name == "target-pull") return AttackKind::target_pull;
    if (name == "coordinated") return AttackKind::coordinated;
    if (name == "split-brain") return AttackKind::split_brain;
    throw invalid_params_error("unknown attack kind: " + name);
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> strategy_emit(const AttackSpec& s, const EmitContext& ctx) {
    const std::size_t dim = ctx.states.at(ctx.to).size();
    switch (s.kind) {
        case AttackKind::constant_value: {
            if (s.value.size() != dim) throw size_mismatch_error("constant attack dimension");
            return s.value;
        }
        case AttackKind::uniform_noise: {
            if (s.box_lo.size() != dim || s.box_hi.size() != dim)
                throw size_mismatch_error("noise box dimension");
            auto rng = make_rng(derive_seed(ctx.seed, static_cast<std::uint64_t>(ctx.t),
                                            static_cast<std::uint64_t>(ctx.from),
                                            static_cast<std::uint64_t>(ctx.to)));
            std::vector<double> out(dim);
            for (std::size_t c = 0; c < dim; ++c)
                out[c] = s.box_lo[c] + unit_uniform(rng) * (s.box_hi[c] - s.box_lo[c]);
            return out;
        }
        case AttackKind::target_pull: {
            if (s.value.size() != dim) throw size_mismatch_error("pull target dimension");
            std::vector<double> out(dim);
            const auto& x = ctx.states[ctx.to];
            for (std::size_t c = 0; c < dim; ++c) out[c] = x[c] + s.gain * (s.value[c] - x[c]);
            return out;
        }
        case AttackKind::coordinated: {
            if (s.value.size() != dim) throw size_mismatch_error("coordinated offset dimension");
            // every coordinated attacker lands on the same per-round point:
            // honest centroid plus the configured offset
            std::vector<double> out(dim, 0.0);
            for (int i : ctx.normal_ids)
                for (std::size_t c = 0; c < dim; ++c) out[c] += ctx.states[i][c];
            for (std::size_t c = 0; c < dim; ++c)
                out[c] = out[c] / static_cast<double>(ctx.normal_ids.size()) + s.value[c];
            return out;
        }
        case AttackKind::split_brain: {
            if (s.value.size() != dim) throw size_mismatch_error("split-brain base dimension");
            const double sign = ctx.to % 2 == 0 ? 1.0 : -1.0;
            std::vector<double> out(dim);
            for (std::size_t c = 0; c < dim; ++c) out[c] = s.value[c] + sign * s.delta;
            return out;
        }
    }
    throw invalid_params_error("unhandled attack kind");
}

NormalUpdate normal_update(const std::vector<double>& x_i, const obj::ObjectiveSpec& f_i,
                           const RoundInbox& inbox, double alpha_t, int d, int beta,
                           geom::PickPolicy policy) {
    if (static_cast<int>(x_i.size()) != d) throw size_mismatch_error("state dimension");
    std::vector<int> neighbors;
    neighbors.reserve(inbox.from.size());
    for (const auto& [j, val] : inbox.from) {
        if (static_cast<int>(val.size()) != d) throw size_mismatch_error("message dimension");
        neighbors.push_back(j);
    }
    auto fam = geom::subset_families(neighbors, d, beta);

    NormalUpdate up;
    up.a_sets = fam.a_sets;
    up.a_count = fam.a_sets.size();
    up.v.assign(x_i.begin(), x_i.end());
    for (std::size_t j = 0; j < fam.a_sets.size(); ++j) {
        geom::HullSystem hs;
        hs.dim = d;
        for (const auto& bset : fam.b_sets[j]) {
            geom::PointSet ps;
            ps.dim = d;
            for (int k : bset) {
                ps.ids.push_back(k);
                ps.pts.push_back(inbox.from.at(k));
            }
            hs.hulls.push_back(std::move(ps));
        }
        auto pick = geom::pick_intersection_point(hs, policy);
        for (int c = 0; c < d; ++c) up.v[c] += pick.point[c];
        up.picks.push_back(std::move(pick));
    }
    const double denom = 1.0 + static_cast<double>(up.a_count);
    for (double& c : up.v) c /= denom;

    const auto g = obj::subgradient(f_i, up.v);
    up.x_next.resize(up.v.size());
    for (std::size_t c = 0; c < up.v.size(); ++c) up.x_next[c] = up.v[c] - alpha_t * g[c];
    return up;
}

NormalUpdate raw_average_update(const std::vector<double>& x_i, const obj::ObjectiveSpec& f_i,
                                const RoundInbox& inbox, double alpha_t) {
    NormalUpdate up;
    up.a_count = inbox.from.size();
    up.v.assign(x_i.begin(), x_i.end());
    for (const auto& [j, val] : inbox.from) {
        (void)j;
        if (val.size() != x_i.size()) throw size_mismatch_error("message dimension");
        for (std::size_t c = 0; c < val.size(); ++c) up.v[c] += val[c];
    }
    const double denom = 1.0 + static_cast<double>(up.a_count);
    for (double& c : up.v) c /= denom;
    const auto g = obj::subgradient(f_i, up.v);
    up.x_next.resize(up.v.size());
    for (std::size_t c = 0; c < up.v.size(); ++c) up.x_next[c] = up.v[c] - alpha_t * g[c];
    return up;
}

bool AgentWorld::is_byzantine(int i) const {
    return std::binary_search(byzantine.begin(), byzantine.end(), i);
}

void validate_world(AgentWorld& w) {
    const int n = w.g.n;
    if (w.objectives.size() != n) throw invalid_params_error("one objective per agent required");
    if (w.objectives.dim != w.d) throw size_mismatch_error("objective dimension != d");
    if (w.d < 1 || w.beta < 0) throw invalid_params_error("need d >= 1 and beta >= 0");
    std::sort(w.byzantine.begin(), w.byzantine.end());
    w.byzantine.erase(std::unique(w.byzantine.begin(), w.byzantine.end()), w.byzantine.end());
    for (int b : w.byzantine) {
        if (b < 0 || b >= n) throw invalid_params_error("byzantine id out of range");
        if (!w.attacks.count(b))
            throw invalid_params_error("byzantine agent " + std::to_string(b) +
                                       " has no attack strategy");
    }
    if (static_cast<int>(w.states.size()) != n)
        throw size_mismatch_error("one state vector per agent required");
    for (const auto& x : w.states)
        if (static_cast<int>(x.size()) != w.d) throw size_mismatch_error("state dimension");

    w.normal.clear();
    for (int i = 0; i < n; ++i)
        if (!w.is_byzantine(i)) w.normal.push_back(i);
    if (w.normal.empty()) throw invalid_params_error("no normal agents");

    const int need = (w.d + 1) * w.beta + 1;
    for (int i : w.normal) {
        const auto& in = w.g.in[i];
        if (static_cast<int>(in.size()) < need)
            throw too_few_neighbors_error("agent " + std::to_string(i) + " has " +
                                          std::to_string(in.size()) + " in-neighbors, needs " +
                                          std::to_string(need));
        int bad = 0;
        for (int j : in)
            if (w.is_byzantine(j)) ++bad;
        if (bad > w.beta)
            throw invalid_params_error("agent " + std::to_string(i) + " has " +
                                       std::to_string(bad) + " Byzantine in-neighbors, beta is " +
                                       std::to_string(w.beta));
    }
}

RoundRecord run_round(AgentWorld& w, int threads) {
    RoundRecord rec;
    rec.t = w.t;
    rec.alpha = stepsize(w.schedule, w.t);
    rec.x = w.states;

    // emissions first, from the frozen time-t snapshot
    std::map<int, RoundInbox> inboxes;
    for (int i : w.normal) inboxes[i];
    for (const auto& [from, to] : w.g.arcs) {
        std::vector<double> msg;
        if (w.is_byzantine(from)) {
            EmitContext ctx{w.t, from, to, rec.x, w.normal, w.seed};
            msg = strategy_emit(w.attacks.at(from), ctx);
        } else {
            msg = rec.x[from];
        }
        rec.messages.push_back({{from, to}, msg});
        if (!w.is_byzantine(to)) inboxes[to].from.emplace(from, std::move(msg));
    }

    const int m = static_cast<int>(w.normal.size());
    std::vector<NormalUpdate> ups(m);
    std::vector<std::exception_ptr> failures(m);
    auto step = [&](int slot) {
        const int i = w.normal[slot];
        try {
            ups[slot] = w.rule == UpdateRule::hull_pick
                            ? normal_update(rec.x[i], w.objectives.members[i], inboxes[i],
                                            rec.alpha, w.d, w.beta, w.policy)
                            : raw_average_update(rec.x[i], w.objectives.members[i], inboxes[i],
                                                 rec.alpha);
        } catch (...) {
            failures[slot] = std::current_exception();
        }
    };
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int slot = 0; slot < m; ++slot) step(slot);
#else
    (void)threads;
    for (int slot = 0; slot < m; ++slot) step(slot);
#endif
    for (int slot = 0; slot < m; ++slot)
        if (failures[slot]) std::rethrow_exception(failures[slot]);

    for (int slot = 0; slot < m; ++slot) {
        const int i = w.normal[slot];
        w.states[i] = ups[slot].x_next;
        rec.updates.emplace(i, std::move(ups[slot]));
    }
    ++w.t;
    return rec;
}

}  // namespace byzgrad::proto
