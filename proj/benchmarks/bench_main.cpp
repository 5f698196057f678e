// Timing harness for the two OpenMP kernels (reduction enumeration and the
// round engine) against their serial reference paths. Checks agreement while
// it measures, so a speedup with wrong answers cannot slip through.

#include <chrono>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "byzgrad/objectives.hpp"
#include "byzgrad/protocol.hpp"
#include "byzgrad/resilience.hpp"

using namespace byzgrad;

namespace {

template <typename F>
double seconds(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const std::string& name, double serial, double parallel, bool agree) {
    std::cout << std::left << std::setw(34) << name << std::right << std::fixed
              << std::setprecision(3) << std::setw(9) << serial << " s" << std::setw(9)
              << parallel << " s" << std::setw(8) << std::setprecision(2)
              << (parallel > 0 ? serial / parallel : 0.0) << "x  "
              << (agree ? "results agree" : "RESULTS DIFFER") << "\n";
}

proto::AgentWorld attack_world(int n, std::uint64_t seed) {
    proto::AgentWorld w;
    w.g = graph::DiGraph::complete(n);
    std::vector<obj::ObjectiveSpec> specs(
        n, obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt});
    w.objectives = obj::make_objective_set(specs);
    w.byzantine = {n - 1};
    proto::AttackSpec atk;
    atk.kind = proto::AttackKind::split_brain;
    atk.value = {0.0};
    atk.delta = 100.0;
    w.attacks.emplace(n - 1, atk);
    w.d = 1;
    w.beta = 1;
    w.schedule = proto::harmonic_schedule(1.0);
    w.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    w.states.assign(n, std::vector<double>(1, 0.0));
    for (auto& x : w.states) x[0] = u(rng);
    proto::validate_world(w);
    return w;
}

std::vector<std::vector<double>> run_rounds(proto::AgentWorld w, int T, int threads) {
    for (int t = 0; t < T; ++t) proto::run_round(w, threads);
    return w.states;
}

}  // namespace

int main(int argc, char** argv) {
    int clique = 8;
    int rounds = 150;
    int agents = 14;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::strcmp(argv[i], "--clique") == 0) clique = std::atoi(argv[i + 1]);
        else if (std::strcmp(argv[i], "--rounds") == 0) rounds = std::atoi(argv[i + 1]);
        else if (std::strcmp(argv[i], "--agents") == 0) agents = std::atoi(argv[i + 1]);
        else {
            std::cerr << "usage: byzgrad_bench [--clique N] [--rounds T] [--agents N]\n";
            return 2;
        }
    }

#ifdef _OPENMP
    std::cout << "OpenMP max threads: " << omp_get_max_threads() << "\n\n";
#else
    std::cout << "built without OpenMP; both columns run the serial path\n\n";
#endif
    std::cout << std::left << std::setw(34) << "workload" << std::right << std::setw(11)
              << "serial" << std::setw(11) << "parallel" << std::setw(9) << "speedup"
              << "\n";

    {
        const auto g = graph::DiGraph::complete(clique);
        graph::ResilienceReport serial_rep, parallel_rep;
        const double ts = seconds([&] { serial_rep = graph::check_resilient(g, 1, 1, 1); });
        const double tp = seconds([&] { parallel_rep = graph::check_resilient(g, 1, 1, 0); });
        const bool agree = serial_rep.resilient == parallel_rep.resilient &&
                           serial_rep.checked == parallel_rep.checked;
        report("resilience over K" + std::to_string(clique) + " (" +
                   std::to_string(serial_rep.checked) + " reductions)",
               ts, tp, agree);
    }

    {
        const auto g = graph::DiGraph::complete(clique - 1);
        int ks = 0, kp = 0;
        const double ts = seconds([&] { ks = graph::kappa_rs(g, 1, 1, 1); });
        const double tp = seconds([&] { kp = graph::kappa_rs(g, 1, 1, 0); });
        report("kappa over K" + std::to_string(clique - 1), ts, tp, ks == kp);
    }

    {
        std::vector<std::vector<double>> serial_states, parallel_states;
        const double ts =
            seconds([&] { serial_states = run_rounds(attack_world(agents, 9), rounds, 1); });
        const double tp =
            seconds([&] { parallel_states = run_rounds(attack_world(agents, 9), rounds, 0); });
        report("round engine, " + std::to_string(agents) + " agents x " +
                   std::to_string(rounds) + " rounds",
               ts, tp, serial_states == parallel_states);
    }

    return 0;
}
