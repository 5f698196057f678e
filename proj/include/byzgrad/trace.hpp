#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "byzgrad/digraph.hpp"
#include "byzgrad/objectives.hpp"
#include "byzgrad/protocol.hpp"

namespace byzgrad::trace {

enum class RunOutcome { completed, pick_infeasible };

// constants recomputable from the config; carried so a trace file is
// self-describing. kappa and l are 0 when the graph fails the resilience
// hypothesis, eta and lambda are 0 when their prerequisites fail.
struct TraceHeader {
    std::uint64_t seed = 0;
    int n = 0;
    int d = 1;
    int beta = 0;
    int horizon = 0;
    std::vector<int> byzantine;
    std::vector<int> normal;
    double eta = 0.0;
    double lambda = 0.0;
    int kappa = 0;
    int l = 0;
    std::string schedule;
    std::string pick_policy;
    std::string update_rule;
    std::vector<double> init_box_lo, init_box_hi;  // empty when states were explicit
    std::string config_echo;
};

struct RunTrace {
    TraceHeader header;
    graph::DiGraph g;
    obj::ObjectiveSet objectives;
    std::vector<proto::RoundRecord> records;           // rounds 0 .. T-1
    std::vector<std::vector<double>> final_states;     // time-T states, all agents
    RunOutcome outcome = RunOutcome::completed;
    std::string outcome_detail;
};

// states of all agents at time t; t == records.size() gives the final states
const std::vector<std::vector<double>>& states_at(const RunTrace& tr, int t);

// one row per round plus a final row with an empty alpha column; the distance
// and gap columns stay empty when the normal-sum argmin is unavailable
void write_trace_csv(const RunTrace& tr, const std::string& path);

// line-delimited json: a header line, one line per round with certificates,
// and a closing line with the final states and outcome
void write_trace_jsonl(const RunTrace& tr, const std::string& path);
RunTrace read_trace_jsonl(const std::string& path);

}  // namespace byzgrad::trace
