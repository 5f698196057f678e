#pragma once

#include <cstdint>
#include <optional>

#include "byzgrad/reduced.hpp"

namespace byzgrad::graph {

struct ResilienceReport {
    bool resilient = false;
    std::optional<ReducedGraphSpec> witness;  // lex-first non-rooted reduction
    std::uint64_t checked = 0;
};

// degree filter: every vertex needs at least r + s + 1 information sources.
// necessary for resilience only when s >= 1; with s = 0 sparse rooted graphs
// (a directed cycle, say) violate it while staying resilient.
bool min_neighbor_precheck(const DiGraph& g, int r, int s);

// full enumeration, short-circuiting on the first non-rooted reduction.
// threads = 1 runs the serial reference path; 0 uses the OpenMP default.
ResilienceReport check_resilient(const DiGraph& g, int r, int s, int threads = 0);

inline bool is_resilient(const DiGraph& g, int r, int s, int threads = 0) {
    return check_resilient(g, r, s, threads).resilient;
}

// minimum root count over every reduction; throws not_resilient_error when a
// reduction has no root
int kappa_rs(const DiGraph& g, int r, int s, int threads = 0);

// randomized spot check for graphs too large to enumerate; not a certificate
struct SampleReport {
    bool all_rooted = false;
    int min_kappa = 0;
    std::uint64_t samples = 0;
};

SampleReport sample_resilience(const DiGraph& g, int r, int s, std::uint64_t samples,
                               std::uint64_t seed);

}  // namespace byzgrad::graph
