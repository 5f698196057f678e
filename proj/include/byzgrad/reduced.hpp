#pragma once

#include <cstdint>
#include <vector>

#include "byzgrad/digraph.hpp"

namespace byzgrad::graph {

// one reduction: keep |V| - r vertices, then delete exactly min(s, in-degree)
// incoming arcs at every kept vertex (in-degree measured in the induced graph)
struct ReducedGraphSpec {
    std::vector<int> kept;                          // sorted original ids
    std::vector<std::pair<int, int>> removed_arcs;  // original ids, sorted

    bool operator==(const ReducedGraphSpec& other) const {
        return kept == other.kept && removed_arcs == other.removed_arcs;
    }
};

// compact graph on the kept vertices; vertex i is spec.kept[i]
DiGraph apply_reduction(const DiGraph& g, const ReducedGraphSpec& spec);

// exact number of reduced graphs; throws std::overflow_error when it does not
// fit in 64 bits
std::uint64_t reduced_graph_count(const DiGraph& g, int r, int s);

// lazy lexicographic enumeration: kept subsets in lex order, and within a
// subset the per-vertex removal choices advance odometer style with the last
// vertex fastest
class ReducedGraphEnumerator {
public:
    ReducedGraphEnumerator(const DiGraph& g, int r, int s);

    bool next(ReducedGraphSpec& spec, DiGraph& reduced);
    bool next(ReducedGraphSpec& spec);

    // jump to the first removal choice of the subset with this lex rank;
    // used to split work across threads deterministically
    void seek_subset(std::uint64_t subset_rank);
    std::uint64_t subset_count() const;
    std::uint64_t current_subset_rank() const { return subset_rank_; }

private:
    const DiGraph& g_;
    int r_, s_, m_;
    bool started_ = false, pending_ = false, done_ = false;
    std::uint64_t subset_rank_ = 0;
    std::vector<int> subset_;                     // current kept vertices
    std::vector<std::vector<int>> induced_in_;    // per kept vertex, kept in-neighbors
    std::vector<int> take_;                       // per kept vertex, arcs to delete
    std::vector<std::vector<int>> choice_;        // per kept vertex, indices into induced_in_

    void load_subset();
    bool advance_subset();
    bool advance_choice();
    void fill(ReducedGraphSpec& spec) const;
};

void validate_reduction_params(const DiGraph& g, int r, int s);

}  // namespace byzgrad::graph
