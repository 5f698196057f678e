#include "byzgrad/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "byzgrad/bounds.hpp"
#include "byzgrad/errors.hpp"
#include "byzgrad/resilience.hpp"
#include "byzgrad/rng.hpp"

namespace byzgrad::cfg {

std::string pick_policy_name(geom::PickPolicy p) {
    switch (p) {
        case geom::PickPolicy::automatic:
            return "automatic";
        case geom::PickPolicy::lp:
            return "lp";
        case geom::PickPolicy::interval_midpoint:
            return "midpoint";
    }
    return "?";
}

geom::PickPolicy pick_policy_from_name(const std::string& name) {
    if (name == "automatic") return geom::PickPolicy::automatic;
    if (name == "lp") return geom::PickPolicy::lp;
    if (name == "midpoint") return geom::PickPolicy::interval_midpoint;
    throw config_invalid_error("unknown pick policy: " + name);
}

std::string update_rule_name(proto::UpdateRule r) {
    return r == proto::UpdateRule::hull_pick ? "hull-pick" : "raw-average";
}

proto::UpdateRule update_rule_from_name(const std::string& name) {
    if (name == "hull-pick") return proto::UpdateRule::hull_pick;
    if (name == "raw-average") return proto::UpdateRule::raw_average;
    throw config_invalid_error("unknown update rule: " + name);
}

namespace {

int parse_agent_id(const std::string& s, const std::string& where) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
        }))
        throw config_invalid_error(where + " needs a numeric agent id, got: " + s);
    return std::stoi(s);
}

std::vector<double> value_as_vector(const toml::Value& v, const std::string& key) {
    if (v.kind == toml::Value::Kind::number) return {v.num};
    return v.as_double_array(key);
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    namespace fs = std::filesystem;
    if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).string();
}

const char* const kRunKeys[] = {"d",           "beta",
                                "T",           "seed",
                                "schedule",    "a0",
                                "pick_policy", "update_rule",
                                "require_resilient", "require_redundant",
                                "init_box_lo", "init_box_hi"};
const char* const kAdversaryKeys[] = {"kind", "value", "box_lo", "box_hi", "gain", "delta"};

void check_known_keys(const toml::Table& t) {
    for (const auto& [key, value] : t.values) {
        (void)value;
        if (key == "graph.path" || key == "objectives.path") continue;
        if (key.rfind("run.", 0) == 0) {
            const std::string sub = key.substr(4);
            if (std::find_if(std::begin(kRunKeys), std::end(kRunKeys),
                             [&](const char* k) { return sub == k; }) == std::end(kRunKeys))
                throw config_invalid_error("unknown run key: " + key);
            continue;
        }
        if (key.rfind("adversary.", 0) == 0) {
            const std::string rest = key.substr(10);
            const std::size_t dot = rest.find('.');
            if (dot == std::string::npos)
                throw config_invalid_error("adversary entries live in [adversary.<id>]: " + key);
            parse_agent_id(rest.substr(0, dot), key);
            const std::string sub = rest.substr(dot + 1);
            if (std::find_if(std::begin(kAdversaryKeys), std::end(kAdversaryKeys),
                             [&](const char* k) { return sub == k; }) ==
                std::end(kAdversaryKeys))
                throw config_invalid_error("unknown adversary key: " + key);
            continue;
        }
        if (key.rfind("init.", 0) == 0) {
            parse_agent_id(key.substr(5), key);
            continue;
        }
        throw config_invalid_error("unknown config key: " + key);
    }
}

}  // namespace

ExperimentConfig parse_config(const toml::Table& t, const std::string& echo,
                              const std::string& base_dir) {
    check_known_keys(t);
    ExperimentConfig cfg;
    cfg.config_echo = echo;
    cfg.graph_path = resolve_path(t.get_string("graph.path"), base_dir);
    cfg.objectives_path = resolve_path(t.get_string("objectives.path"), base_dir);

    cfg.d = static_cast<int>(t.get_int("run.d", 1));
    cfg.beta = static_cast<int>(t.get_int("run.beta", 0));
    cfg.T = static_cast<int>(t.get_int("run.T", 0));
    if (cfg.d < 1) throw config_invalid_error("run.d must be at least 1");
    if (cfg.beta < 0) throw config_invalid_error("run.beta must be nonnegative");
    if (cfg.T < 0) throw config_invalid_error("run.T must be nonnegative");
    if (t.has("run.seed")) {
        const long long s = t.get("run.seed").as_int("run.seed");
        if (s < 0) throw config_invalid_error("run.seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(s);
        cfg.seed_set = true;
    }

    const std::string sched = t.has("run.schedule") ? t.get_string("run.schedule") : "harmonic";
    if (sched == "harmonic") {
        cfg.schedule = proto::harmonic_schedule(t.get_double("run.a0", 1.0));
    } else if (sched == "fixed") {
        if (cfg.T < 1) throw config_invalid_error("fixed schedule needs run.T >= 1");
        cfg.schedule = proto::fixed_schedule(cfg.T);
    } else {
        throw config_invalid_error("unknown schedule: " + sched);
    }
    if (sched != "harmonic" && t.has("run.a0"))
        throw config_invalid_error("run.a0 applies to the harmonic schedule only");

    cfg.policy = t.has("run.pick_policy") ? pick_policy_from_name(t.get_string("run.pick_policy"))
                                          : geom::PickPolicy::automatic;
    cfg.rule = t.has("run.update_rule") ? update_rule_from_name(t.get_string("run.update_rule"))
                                        : proto::UpdateRule::hull_pick;
    cfg.require_resilient = t.get_bool("run.require_resilient", false);
    cfg.require_redundant = t.get_bool("run.require_redundant", false);

    cfg.init_box_lo = t.has("run.init_box_lo")
                          ? t.get("run.init_box_lo").as_double_array("run.init_box_lo")
                          : std::vector<double>(cfg.d, 0.0);
    cfg.init_box_hi = t.has("run.init_box_hi")
                          ? t.get("run.init_box_hi").as_double_array("run.init_box_hi")
                          : std::vector<double>(cfg.d, 1.0);
    for (auto* box : {&cfg.init_box_lo, &cfg.init_box_hi})
        if (box->size() == 1 && cfg.d > 1) box->assign(cfg.d, box->front());
    if (static_cast<int>(cfg.init_box_lo.size()) != cfg.d ||
        static_cast<int>(cfg.init_box_hi.size()) != cfg.d)
        throw config_invalid_error("init box dimensions do not match run.d");
    for (int c = 0; c < cfg.d; ++c)
        if (cfg.init_box_lo[c] > cfg.init_box_hi[c])
            throw config_invalid_error("init box is inverted");

    for (const std::string& sub : t.keys_under("adversary")) {
        const std::size_t dot = sub.find('.');
        const int id = parse_agent_id(sub.substr(0, dot), "adversary table");
        if (cfg.adversaries.count(id)) continue;
        const std::string prefix = "adversary." + std::to_string(id) + ".";
        proto::AttackSpec spec;
        spec.kind = proto::attack_from_name(t.get_string(prefix + "kind"));
        if (t.has(prefix + "value"))
            spec.value = value_as_vector(t.get(prefix + "value"), prefix + "value");
        if (t.has(prefix + "box_lo"))
            spec.box_lo = value_as_vector(t.get(prefix + "box_lo"), prefix + "box_lo");
        if (t.has(prefix + "box_hi"))
            spec.box_hi = value_as_vector(t.get(prefix + "box_hi"), prefix + "box_hi");
        spec.gain = t.get_double(prefix + "gain", spec.gain);
        spec.delta = t.get_double(prefix + "delta", spec.delta);
        for (auto* v : {&spec.value, &spec.box_lo, &spec.box_hi})
            if (v->size() == 1 && cfg.d > 1) v->assign(cfg.d, v->front());
        cfg.adversaries.emplace(id, std::move(spec));
    }

    for (const std::string& sub : t.keys_under("init")) {
        const int id = parse_agent_id(sub, "init table");
        auto state = value_as_vector(t.get("init." + sub), "init." + sub);
        if (static_cast<int>(state.size()) != cfg.d)
            throw config_invalid_error("init." + sub + " dimension does not match run.d");
        cfg.init_states.emplace(id, std::move(state));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    return parse_config(toml::parse_toml(text), text,
                        std::filesystem::path(path).parent_path().string());
}

HypothesisReport validate_hypotheses(const ExperimentConfig& cfg, const graph::DiGraph& g,
                                     const obj::ObjectiveSet& os, int threads) {
    HypothesisReport rep;
    const int r = cfg.beta, s = cfg.d * cfg.beta;
    auto res = graph::check_resilient(g, r, s, threads);
    rep.resilient = res.resilient;
    rep.resilience_witness = res.witness;
    rep.reductions_checked = res.checked;
    if (!rep.resilient) {
        rep.notes = "graph is not (" + std::to_string(r) + ", " + std::to_string(s) +
                    ")-resilient; redundancy requirement is undefined without kappa";
        return rep;
    }
    rep.kappa = graph::kappa_rs(g, r, s, threads);
    rep.required_redundancy = g.n - rep.kappa;
    try {
        auto red = obj::check_k_redundant(os, rep.required_redundancy);
        rep.redundancy_checked = true;
        rep.redundant = red.redundant;
        rep.redundancy_witness = red.witness;
    } catch (const empty_zero_set_error& e) {
        rep.redundancy_checked = true;
        rep.redundant = false;
        rep.notes = std::string("a required subset has no common minimizer certificate: ") +
                    e.what();
    } catch (const unsupported_family_error& e) {
        rep.redundancy_checked = false;
        rep.notes = std::string("redundancy check unsupported for this family: ") + e.what();
    }
    return rep;
}

void enforce_requirements(const ExperimentConfig& cfg, const HypothesisReport& rep) {
    if (cfg.require_resilient && !rep.resilient)
        throw hypothesis_failed_error("required hypothesis failed: graph is not (" +
                                      std::to_string(cfg.beta) + ", " +
                                      std::to_string(cfg.d * cfg.beta) + ")-resilient");
    if (cfg.require_redundant && !(rep.redundancy_checked && rep.redundant))
        throw hypothesis_failed_error(
            "required hypothesis failed: objective set is not " +
            std::to_string(rep.required_redundancy) + "-redundant" +
            (rep.notes.empty() ? "" : " (" + rep.notes + ")"));
}

LoadedExperiment prepare_experiment(const ExperimentConfig& cfg, int threads) {
    LoadedExperiment exp;
    exp.cfg = cfg;
    exp.g = graph::load_graph_json(cfg.graph_path);
    exp.os = obj::load_objectives_json(cfg.objectives_path);
    exp.hypotheses = validate_hypotheses(cfg, exp.g, exp.os, threads);
    enforce_requirements(cfg, exp.hypotheses);
    return exp;
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

trace::RunTrace run_experiment(const LoadedExperiment& exp, int threads) {
    const ExperimentConfig& cfg = exp.cfg;
    if (!cfg.seed_set) throw config_invalid_error("run.seed (or --seed) is required");

    proto::AgentWorld w;
    w.g = exp.g;
    w.objectives = exp.os;
    for (const auto& [id, spec] : cfg.adversaries) {
        w.byzantine.push_back(id);
        w.attacks.emplace(id, spec);
    }
    w.d = cfg.d;
    w.beta = cfg.beta;
    w.schedule = cfg.schedule;
    w.policy = cfg.policy;
    w.rule = cfg.rule;
    w.seed = cfg.seed;

    const int n = exp.g.n;
    if (!cfg.init_states.empty()) {
        if (static_cast<int>(cfg.init_states.size()) != n)
            throw config_invalid_error("[init] must list every agent when present");
        w.states.resize(n);
        for (const auto& [id, x] : cfg.init_states) {
            if (id < 0 || id >= n) throw config_invalid_error("init agent id out of range");
            w.states[id] = x;
        }
    } else {
        auto rng = make_rng(derive_seed(cfg.seed, 0xA5u));
        w.states.assign(n, std::vector<double>(cfg.d, 0.0));
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < cfg.d; ++c)
                w.states[i][c] = cfg.init_box_lo[c] +
                                 unit_uniform(rng) * (cfg.init_box_hi[c] - cfg.init_box_lo[c]);
    }
    proto::validate_world(w);

    trace::RunTrace tr;
    tr.g = exp.g;
    tr.objectives = exp.os;
    tr.header.seed = cfg.seed;
    tr.header.n = n;
    tr.header.d = cfg.d;
    tr.header.beta = cfg.beta;
    tr.header.horizon = cfg.T;
    tr.header.byzantine = w.byzantine;
    tr.header.normal = w.normal;
    tr.header.kappa = exp.hypotheses.kappa;
    tr.header.pick_policy = pick_policy_name(cfg.policy);
    tr.header.update_rule = update_rule_name(cfg.rule);
    tr.header.config_echo = cfg.config_echo;
    if (cfg.init_states.empty()) {
        tr.header.init_box_lo = cfg.init_box_lo;
        tr.header.init_box_hi = cfg.init_box_hi;
    }
    {
        std::ostringstream s;
        if (cfg.schedule.kind == proto::ScheduleKind::harmonic)
            s << "harmonic(a0=" << cfg.schedule.a0 << ")";
        else
            s << "fixed(T=" << cfg.schedule.horizon << ")";
        tr.header.schedule = s.str();
    }
    const int nh = static_cast<int>(w.normal.size());
    try {
        std::vector<int> sizes;
        for (int i : w.normal) sizes.push_back(w.g.in_degree(i));
        tr.header.eta = graph::eta_bound(sizes, cfg.d, cfg.beta);
    } catch (const std::exception&) {
        tr.header.eta = 0.0;
    }
    if (nh >= 2 && tr.header.eta > 0.0)
        tr.header.lambda = graph::lambda_rate(tr.header.eta, nh);
    if (tr.header.kappa >= 1 && tr.header.kappa <= nh && nh >= 2)
        tr.header.l = (nh - tr.header.kappa + 1) * (nh - 2) + 1;

    for (int t = 0; t < cfg.T; ++t) {
        try {
            tr.records.push_back(proto::run_round(w, threads));
        } catch (const infeasible_error& e) {
            tr.outcome = trace::RunOutcome::pick_infeasible;
            tr.outcome_detail = e.what();
            break;
        }
    }
    tr.final_states = w.states;
    return tr;
}

trace::RunTrace run_experiment(const ExperimentConfig& cfg, int threads) {
    return run_experiment(prepare_experiment(cfg, threads), threads);
}

}  // namespace byzgrad::cfg
