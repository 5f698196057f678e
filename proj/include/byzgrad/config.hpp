#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "byzgrad/digraph.hpp"
#include "byzgrad/objectives.hpp"
#include "byzgrad/protocol.hpp"
#include "byzgrad/reduced.hpp"
#include "byzgrad/toml_lite.hpp"
#include "byzgrad/trace.hpp"

namespace byzgrad::cfg {

struct ExperimentConfig {
    std::string graph_path;
    std::string objectives_path;
    std::map<int, proto::AttackSpec> adversaries;
    int d = 1;
    int beta = 0;
    int T = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    proto::StepSchedule schedule = proto::harmonic_schedule(1.0);
    geom::PickPolicy policy = geom::PickPolicy::automatic;
    proto::UpdateRule rule = proto::UpdateRule::hull_pick;
    bool require_resilient = false;
    bool require_redundant = false;
    std::vector<double> init_box_lo, init_box_hi;            // seeded initial states
    std::map<int, std::vector<double>> init_states;          // explicit initial states
    std::string config_echo;
};

std::string pick_policy_name(geom::PickPolicy p);
geom::PickPolicy pick_policy_from_name(const std::string& name);
std::string update_rule_name(proto::UpdateRule r);
proto::UpdateRule update_rule_from_name(const std::string& name);

// relative graph/objective paths are resolved against base_dir
ExperimentConfig parse_config(const toml::Table& t, const std::string& echo,
                              const std::string& base_dir);
ExperimentConfig load_config(const std::string& path);

struct HypothesisReport {
    bool resilient = false;
    std::optional<graph::ReducedGraphSpec> resilience_witness;
    std::uint64_t reductions_checked = 0;
    int kappa = 0;                // 0 when the graph is not resilient
    int required_redundancy = 0;  // n - kappa, 0 when kappa is unknown
    bool redundancy_checked = false;
    bool redundant = false;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> redundancy_witness;
    std::string notes;
};

// runs the two standing hypotheses: the graph is (beta, d*beta)-resilient and
// the objective set is (n - kappa)-redundant. reports always; throws
// hypothesis_failed_error only for a failed hypothesis whose require_* flag
// is set
HypothesisReport validate_hypotheses(const ExperimentConfig& cfg, const graph::DiGraph& g,
                                     const obj::ObjectiveSet& os, int threads = 0);
void enforce_requirements(const ExperimentConfig& cfg, const HypothesisReport& rep);

struct LoadedExperiment {
    ExperimentConfig cfg;
    graph::DiGraph g;
    obj::ObjectiveSet os;
    HypothesisReport hypotheses;
};

// load referenced files and run the hypothesis checks
LoadedExperiment prepare_experiment(const ExperimentConfig& cfg, int threads = 0);

// T rounds from the config; deterministic given the seed. a runtime pick
// failure ends the trace early with the pick-infeasible outcome instead of
// throwing
trace::RunTrace run_experiment(const LoadedExperiment& exp, int threads = 0);
trace::RunTrace run_experiment(const ExperimentConfig& cfg, int threads = 0);

}  // namespace byzgrad::cfg
