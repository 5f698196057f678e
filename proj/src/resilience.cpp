#include "byzgrad/resilience.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "byzgrad/errors.hpp"
#include "byzgrad/rng.hpp"

namespace byzgrad::graph {

namespace {

struct SubsetScan {
    bool all_rooted = true;
    int min_kappa = std::numeric_limits<int>::max();
    std::uint64_t checked = 0;
    std::optional<ReducedGraphSpec> first_bad;  // first non-rooted within this subset
};

// walk every removal choice of one kept subset; stop at the first non-rooted
// reduction when short_circuit is set
SubsetScan scan_subset(const DiGraph& g, int r, int s, std::uint64_t subset_rank,
                       bool short_circuit) {
    ReducedGraphEnumerator en(g, r, s);
    en.seek_subset(subset_rank);
    SubsetScan scan;
    ReducedGraphSpec spec;
    DiGraph red;
    while (en.next(spec, red)) {
        if (en.current_subset_rank() != subset_rank) break;
        ++scan.checked;
        auto rts = roots(red);
        if (rts.empty()) {
            scan.all_rooted = false;
            scan.first_bad = spec;
            if (short_circuit) break;
        } else {
            scan.min_kappa = std::min(scan.min_kappa, static_cast<int>(rts.size()));
        }
    }
    return scan;
}

struct FullScan {
    bool all_rooted = true;
    int min_kappa = std::numeric_limits<int>::max();
    std::uint64_t checked = 0;
    std::optional<ReducedGraphSpec> witness;
};

FullScan scan_serial(const DiGraph& g, int r, int s, bool short_circuit) {
    ReducedGraphEnumerator en(g, r, s);
    FullScan out;
    ReducedGraphSpec spec;
    DiGraph red;
    while (en.next(spec, red)) {
        ++out.checked;
        auto rts = roots(red);
        if (rts.empty()) {
            out.all_rooted = false;
            out.witness = spec;
            if (short_circuit) break;
        } else {
            out.min_kappa = std::min(out.min_kappa, static_cast<int>(rts.size()));
        }
    }
    return out;
}

FullScan scan_parallel(const DiGraph& g, int r, int s, bool short_circuit, int threads) {
    const std::uint64_t nsub = ReducedGraphEnumerator(g, r, s).subset_count();
    FullScan out;
    std::atomic<std::uint64_t> best_bad{UINT64_MAX};  // lowest subset rank with a failure
    std::vector<std::optional<ReducedGraphSpec>> bad(nsub);
    std::atomic<std::uint64_t> checked{0};
    int mink = std::numeric_limits<int>::max();

#ifdef _OPENMP
    int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) reduction(min : mink) num_threads(nt)
#endif
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(nsub); ++idx) {
        auto rank = static_cast<std::uint64_t>(idx);
        if (short_circuit && rank > best_bad.load(std::memory_order_relaxed)) continue;
        SubsetScan scan = scan_subset(g, r, s, rank, short_circuit);
        checked.fetch_add(scan.checked, std::memory_order_relaxed);
        if (scan.min_kappa < mink) mink = scan.min_kappa;
        if (!scan.all_rooted) {
            bad[rank] = scan.first_bad;
            std::uint64_t cur = best_bad.load();
            while (rank < cur && !best_bad.compare_exchange_weak(cur, rank)) {
            }
        }
    }
    (void)threads;

    out.checked = checked.load();
    out.min_kappa = mink;
    std::uint64_t first = best_bad.load();
    if (first != UINT64_MAX) {
        out.all_rooted = false;
        out.witness = bad[first];
    }
    return out;
}

FullScan scan(const DiGraph& g, int r, int s, bool short_circuit, int threads) {
    validate_reduction_params(g, r, s);
    bool serial = threads == 1;
#ifndef _OPENMP
    serial = true;
#endif
    return serial ? scan_serial(g, r, s, short_circuit) : scan_parallel(g, r, s, short_circuit, threads);
}

}  // namespace

bool min_neighbor_precheck(const DiGraph& g, int r, int s) {
    for (int v = 0; v < g.n; ++v)
        if (g.in_degree(v) < r + s + 1) return false;
    return true;
}

ResilienceReport check_resilient(const DiGraph& g, int r, int s, int threads) {
    FullScan sc = scan(g, r, s, /*short_circuit=*/true, threads);
    return ResilienceReport{sc.all_rooted, sc.witness, sc.checked};
}

int kappa_rs(const DiGraph& g, int r, int s, int threads) {
    FullScan sc = scan(g, r, s, /*short_circuit=*/false, threads);
    if (!sc.all_rooted) throw not_resilient_error("a reduction has no root");
    return sc.min_kappa;
}

SampleReport sample_resilience(const DiGraph& g, int r, int s, std::uint64_t samples,
                               std::uint64_t seed) {
    validate_reduction_params(g, r, s);
    SampleReport rep;
    rep.all_rooted = true;
    rep.min_kappa = std::numeric_limits<int>::max();
    rep.samples = samples;
    const int m = g.n - r;
    for (std::uint64_t it = 0; it < samples; ++it) {
        auto rng = make_rng(derive_seed(seed, it));
        // random kept subset
        std::vector<int> verts(g.n);
        for (int i = 0; i < g.n; ++i) verts[i] = i;
        for (int i = 0; i < m; ++i) {
            std::uniform_int_distribution<int> pick(i, g.n - 1);
            std::swap(verts[i], verts[pick(rng)]);
        }
        ReducedGraphSpec spec;
        spec.kept.assign(verts.begin(), verts.begin() + m);
        std::sort(spec.kept.begin(), spec.kept.end());
        std::vector<char> keep(g.n, 0);
        for (int v : spec.kept) keep[v] = 1;
        // random removal choice per vertex
        for (int v : spec.kept) {
            std::vector<int> inc;
            for (int u : g.in[v])
                if (keep[u]) inc.push_back(u);
            int k = std::min<int>(s, static_cast<int>(inc.size()));
            for (int i = 0; i < k; ++i) {
                std::uniform_int_distribution<int> pick(i, static_cast<int>(inc.size()) - 1);
                std::swap(inc[i], inc[pick(rng)]);
            }
            for (int i = 0; i < k; ++i) spec.removed_arcs.emplace_back(inc[i], v);
        }
        std::sort(spec.removed_arcs.begin(), spec.removed_arcs.end());
        auto rts = roots(apply_reduction(g, spec));
        if (rts.empty())
            rep.all_rooted = false;
        else
            rep.min_kappa = std::min(rep.min_kappa, static_cast<int>(rts.size()));
    }
    if (rep.min_kappa == std::numeric_limits<int>::max()) rep.min_kappa = 0;
    return rep;
}

}  // namespace byzgrad::graph
