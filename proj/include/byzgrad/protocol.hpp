#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "byzgrad/digraph.hpp"
#include "byzgrad/geometry.hpp"
#include "byzgrad/objectives.hpp"

namespace byzgrad::proto {

enum class ScheduleKind { harmonic, fixed };

// harmonic: a0 / (t + 1); fixed: 1 / sqrt(T) for t < T only
struct StepSchedule {
    ScheduleKind kind = ScheduleKind::harmonic;
    double a0 = 1.0;
    int horizon = 0;
};

StepSchedule harmonic_schedule(double a0);
StepSchedule fixed_schedule(int horizon);
double stepsize(const StepSchedule& s, int t);

enum class AttackKind { constant_value, uniform_noise, target_pull, coordinated, split_brain };

std::string attack_name(AttackKind k);
AttackKind attack_from_name(const std::string& name);

// one strategy per Byzantine agent. `value` doubles as the constant point, the
// pull target, the coordinated offset from the honest centroid, and the
// split-brain base. emissions are per edge and may differ across receivers.
struct AttackSpec {
    AttackKind kind = AttackKind::constant_value;
    std::vector<double> value;
    std::vector<double> box_lo, box_hi;  // uniform noise support
    double gain = 0.5;                   // target pull step toward the target
    double delta = 1.0;                  // split brain: value +/- delta by receiver parity
};

// strategies are omniscient: they may read every agent's current state
struct EmitContext {
    int t = 0;
    int from = 0;
    int to = 0;
    const std::vector<std::vector<double>>& states;
    const std::vector<int>& normal_ids;
    std::uint64_t seed = 0;
};

std::vector<double> strategy_emit(const AttackSpec& s, const EmitContext& ctx);

// values received by one normal agent this round, keyed by sender
struct RoundInbox {
    std::map<int, std::vector<double>> from;
};

// hull_pick is the protocol; raw_average ignores the trimming families and
// averages everything it hears, kept as the negative control
enum class UpdateRule { hull_pick, raw_average };

struct NormalUpdate {
    std::vector<double> v;
    std::vector<double> x_next;
    std::vector<std::vector<int>> a_sets;  // neighbor ids per trimming family
    std::vector<geom::PickResult> picks;   // aligned with a_sets
    std::uint64_t a_count = 0;
};

// the round update of one well-behaved agent. sees only neighbor values, never
// honesty flags. picks one point per a-set inside all of its b-set hulls, then
// v = (x + sum picks) / (1 + a) and a subgradient step from v.
NormalUpdate normal_update(const std::vector<double>& x_i, const obj::ObjectiveSpec& f_i,
                           const RoundInbox& inbox, double alpha_t, int d, int beta,
                           geom::PickPolicy policy = geom::PickPolicy::automatic);

NormalUpdate raw_average_update(const std::vector<double>& x_i, const obj::ObjectiveSpec& f_i,
                                const RoundInbox& inbox, double alpha_t);

struct AgentWorld {
    graph::DiGraph g;
    obj::ObjectiveSet objectives;  // member i belongs to agent i
    std::vector<int> byzantine;    // sorted ids
    std::map<int, AttackSpec> attacks;
    int d = 1;
    int beta = 0;
    StepSchedule schedule;
    geom::PickPolicy policy = geom::PickPolicy::automatic;
    UpdateRule rule = UpdateRule::hull_pick;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> states;  // all agents, dimension d
    int t = 0;
    std::vector<int> normal;  // complement of byzantine, sorted

    bool is_byzantine(int i) const;
};

// fills `normal` and checks the standing hypotheses: ids in range, one attack
// per Byzantine agent, state dimensions, at most beta Byzantine in-neighbors
// and at least (d+1)*beta + 1 in-neighbors for every normal agent
void validate_world(AgentWorld& w);

// everything observable about one synchronous round t -> t+1
struct RoundRecord {
    int t = 0;
    double alpha = 0.0;
    std::vector<std::vector<double>> x;  // time-t states, all agents
    std::vector<std::pair<std::pair<int, int>, std::vector<double>>>
        messages;                        // ((from, to), value), sorted by edge
    std::map<int, NormalUpdate> updates;
};

// one synchronous round: every agent emits on its out-edges (normal agents
// their true state, Byzantine agents whatever their strategy says), then all
// normal agents update from the time-t snapshot; threads > 1 splits the agent
// updates, threads == 0 uses the OpenMP default
RoundRecord run_round(AgentWorld& w, int threads = 0);

}  // namespace byzgrad::proto
