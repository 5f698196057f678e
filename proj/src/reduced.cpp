#include "byzgrad/reduced.hpp"

#include <algorithm>
#include <stdexcept>

#include "byzgrad/errors.hpp"

namespace byzgrad::graph {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) throw std::overflow_error("reduced graph count overflow");
    return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (b > UINT64_MAX - a) throw std::overflow_error("reduced graph count overflow");
    return a + b;
}

std::uint64_t binom64(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i is integral at each step
        std::uint64_t num = checked_mul(r, static_cast<std::uint64_t>(n - k + i));
        r = num / static_cast<std::uint64_t>(i);
    }
    return r;
}

bool next_combination(std::vector<int>& c, int n) {
    int m = static_cast<int>(c.size());
    for (int i = m - 1; i >= 0; --i) {
        if (c[i] < n - (m - i)) {
            ++c[i];
            for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

void validate_reduction_params(const DiGraph& g, int r, int s) {
    if (r < 0 || s < 0) throw invalid_params_error("r and s must be nonnegative");
    if (r + s > g.n - 1) throw invalid_params_error("need r + s <= n - 1");
}

DiGraph apply_reduction(const DiGraph& g, const ReducedGraphSpec& spec) {
    std::vector<int> pos(g.n, -1);
    for (std::size_t i = 0; i < spec.kept.size(); ++i) pos[spec.kept[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> arcs;
    for (auto [u, v] : g.arcs) {
        if (pos[u] < 0 || pos[v] < 0) continue;
        if (std::binary_search(spec.removed_arcs.begin(), spec.removed_arcs.end(),
                               std::make_pair(u, v)))
            continue;
        arcs.emplace_back(pos[u], pos[v]);
    }
    return DiGraph::from_arcs(static_cast<int>(spec.kept.size()), std::move(arcs));
}

std::uint64_t reduced_graph_count(const DiGraph& g, int r, int s) {
    validate_reduction_params(g, r, s);
    const int m = g.n - r;
    std::vector<int> subset(m);
    for (int i = 0; i < m; ++i) subset[i] = i;
    std::uint64_t total = 0;
    do {
        std::vector<char> keep(g.n, 0);
        for (int v : subset) keep[v] = 1;
        std::uint64_t block = 1;
        for (int v : subset) {
            int indeg = 0;
            for (int u : g.in[v])
                if (keep[u]) ++indeg;
            block = checked_mul(block, binom64(indeg, std::min(s, indeg)));
        }
        total = checked_add(total, block);
    } while (next_combination(subset, g.n));
    return total;
}

ReducedGraphEnumerator::ReducedGraphEnumerator(const DiGraph& g, int r, int s)
    : g_(g), r_(r), s_(s), m_(g.n - r) {
    validate_reduction_params(g, r, s);
}

std::uint64_t ReducedGraphEnumerator::subset_count() const {
    return binom64(g_.n, m_);
}

void ReducedGraphEnumerator::load_subset() {
    std::vector<char> keep(g_.n, 0);
    for (int v : subset_) keep[v] = 1;
    induced_in_.assign(m_, {});
    take_.assign(m_, 0);
    choice_.assign(m_, {});
    for (int i = 0; i < m_; ++i) {
        for (int u : g_.in[subset_[i]])
            if (keep[u]) induced_in_[i].push_back(u);
        take_[i] = std::min(s_, static_cast<int>(induced_in_[i].size()));
        choice_[i].resize(take_[i]);
        for (int j = 0; j < take_[i]; ++j) choice_[i][j] = j;
    }
}

bool ReducedGraphEnumerator::advance_subset() {
    if (!next_combination(subset_, g_.n)) return false;
    ++subset_rank_;
    load_subset();
    return true;
}

bool ReducedGraphEnumerator::advance_choice() {
    for (int i = m_ - 1; i >= 0; --i) {
        if (next_combination(choice_[i], static_cast<int>(induced_in_[i].size()))) {
            for (int j = i + 1; j < m_; ++j)
                for (int k = 0; k < take_[j]; ++k) choice_[j][k] = k;
            return true;
        }
    }
    return false;
}

void ReducedGraphEnumerator::seek_subset(std::uint64_t subset_rank) {
    // unrank the combination directly
    subset_.assign(m_, 0);
    std::uint64_t rank = subset_rank;
    int next_candidate = 0;
    for (int i = 0; i < m_; ++i) {
        for (int v = next_candidate; v < g_.n; ++v) {
            std::uint64_t block = binom64(g_.n - v - 1, m_ - i - 1);
            if (rank < block) {
                subset_[i] = v;
                next_candidate = v + 1;
                break;
            }
            rank -= block;
        }
    }
    subset_rank_ = subset_rank;
    started_ = true;
    pending_ = true;
    done_ = false;
    load_subset();
}

void ReducedGraphEnumerator::fill(ReducedGraphSpec& spec) const {
    spec.kept = subset_;
    spec.removed_arcs.clear();
    for (int i = 0; i < m_; ++i)
        for (int idx : choice_[i]) spec.removed_arcs.emplace_back(induced_in_[i][idx], subset_[i]);
    std::sort(spec.removed_arcs.begin(), spec.removed_arcs.end());
}

bool ReducedGraphEnumerator::next(ReducedGraphSpec& spec) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        pending_ = true;
        subset_.resize(m_);
        for (int i = 0; i < m_; ++i) subset_[i] = i;
        subset_rank_ = 0;
        load_subset();
    }
    if (pending_) {
        pending_ = false;
    } else if (!advance_choice() && !advance_subset()) {
        done_ = true;
        return false;
    }
    fill(spec);
    return true;
}

bool ReducedGraphEnumerator::next(ReducedGraphSpec& spec, DiGraph& reduced) {
    if (!next(spec)) return false;
    reduced = apply_reduction(g_, spec);
    return true;
}

}  // namespace byzgrad::graph
