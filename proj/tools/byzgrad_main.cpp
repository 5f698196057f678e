#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "byzgrad/config.hpp"
#include "byzgrad/errors.hpp"
#include "byzgrad/metrics.hpp"
#include "byzgrad/objectives.hpp"
#include "byzgrad/resilience.hpp"
#include "byzgrad/trace.hpp"

namespace {

using nlohmann::json;
using namespace byzgrad;

int thread_cap() {
    const char* env = std::getenv("BYZGRAD_THREADS");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v > 0 ? v : 0;
}

json reduction_json(const graph::ReducedGraphSpec& spec) {
    json arcs = json::array();
    for (const auto& [u, v] : spec.removed_arcs) arcs.push_back(json::array({u, v}));
    return json{{"kept", spec.kept}, {"removed_arcs", arcs}};
}

int cmd_check_resilient(const std::string& path, int r, int s) {
    const auto g = graph::load_graph_json(path);
    const auto rep = graph::check_resilient(g, r, s, thread_cap());
    json out{{"n", g.n},
             {"r", r},
             {"s", s},
             {"resilient", rep.resilient},
             {"reductions_checked", rep.checked}};
    if (rep.witness) out["witness"] = reduction_json(*rep.witness);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_kappa(const std::string& path, int r, int s, std::uint64_t samples,
              std::uint64_t sample_seed) {
    const auto g = graph::load_graph_json(path);
    json out{{"n", g.n}, {"r", r}, {"s", s}};
    if (samples > 0) {
        const auto rep = graph::sample_resilience(g, r, s, samples, sample_seed);
        out["sampled"] = true;
        out["samples"] = rep.samples;
        out["all_rooted"] = rep.all_rooted;
        if (rep.all_rooted) out["min_kappa_seen"] = rep.min_kappa;
    } else {
        out["sampled"] = false;
        out["kappa"] = graph::kappa_rs(g, r, s, thread_cap());
        out["required_redundancy"] = g.n - out["kappa"].get<int>();
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_check_redundancy(const std::string& path, int k) {
    const auto os = obj::load_objectives_json(path);
    const auto rep = obj::check_k_redundant(os, k);
    json out{{"n", os.size()}, {"k", k}, {"redundant", rep.redundant}};
    if (rep.witness)
        out["witness"] = json{{"first", rep.witness->first}, {"second", rep.witness->second}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_pick(const std::string& path, int d, int beta, const std::string& policy_name) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open points file: " + path);
    json j = json::parse(f, nullptr, true, true);
    proto::RoundInbox inbox;
    for (const auto& item : j.at("values"))
        inbox.from[item.at("id").get<int>()] = item.at("x").get<std::vector<double>>();
    if (j.contains("d")) d = j["d"].get<int>();
    if (j.contains("beta")) beta = j["beta"].get<int>();
    const auto policy = cfg::pick_policy_from_name(policy_name);

    std::vector<int> ids;
    for (const auto& [id, x] : inbox.from) {
        if (static_cast<int>(x.size()) != d) throw size_mismatch_error("point dimension");
        ids.push_back(id);
    }
    const auto fam = geom::subset_families(ids, d, beta);
    json picks = json::array();
    for (std::size_t a = 0; a < fam.a_sets.size(); ++a) {
        geom::HullSystem hs;
        hs.dim = d;
        for (const auto& bset : fam.b_sets[a]) {
            geom::PointSet ps;
            ps.dim = d;
            for (int k : bset) {
                ps.ids.push_back(k);
                ps.pts.push_back(inbox.from.at(k));
            }
            hs.hulls.push_back(std::move(ps));
        }
        auto pick = geom::pick_intersection_point(hs, policy);
        picks.push_back(json{{"a_set", fam.a_sets[a]},
                             {"point", pick.point},
                             {"residual", pick.cert.max_residual}});
    }
    std::cout << json{{"d", d}, {"beta", beta}, {"picks", picks}}.dump(2) << "\n";
    return 0;
}

json hypotheses_json(const cfg::HypothesisReport& h, int beta, int s) {
    json out{{"resilience",
              json{{"r", beta}, {"s", s}, {"pass", h.resilient},
                   {"reductions_checked", h.reductions_checked}}},
             {"redundancy",
              json{{"checked", h.redundancy_checked},
                   {"required", h.required_redundancy},
                   {"pass", h.redundancy_checked && h.redundant}}}};
    if (h.resilience_witness) out["resilience"]["witness"] = reduction_json(*h.resilience_witness);
    if (h.kappa > 0) out["resilience"]["kappa"] = h.kappa;
    if (h.redundancy_witness)
        out["redundancy"]["witness"] = json{{"first", h.redundancy_witness->first},
                                            {"second", h.redundancy_witness->second}};
    if (!h.notes.empty()) out["notes"] = h.notes;
    return out;
}

int run_one(cfg::ExperimentConfig config, const std::string& csv_path,
            const std::string& jsonl_path, bool quiet, trace::RunTrace* out_trace) {
    const auto exp = cfg::prepare_experiment(config, thread_cap());
    if (!quiet)
        std::cout << "hypotheses: "
                  << hypotheses_json(exp.hypotheses, config.beta, config.d * config.beta).dump()
                  << "\n";
    auto tr = cfg::run_experiment(exp, thread_cap());
    if (!csv_path.empty()) trace::write_trace_csv(tr, csv_path);
    if (!jsonl_path.empty()) trace::write_trace_jsonl(tr, jsonl_path);
    if (!quiet) {
        std::vector<std::vector<double>> finals;
        for (int i : tr.header.normal) finals.push_back(tr.final_states[i]);
        json summary{{"rounds", tr.records.size()},
                     {"outcome", tr.outcome == trace::RunOutcome::completed ? "completed"
                                                                            : "pick-infeasible"},
                     {"final_diameter", metrics::consensus_diameter(finals)},
                     {"eta", tr.header.eta},
                     {"lambda", tr.header.lambda},
                     {"kappa", tr.header.kappa},
                     {"l", tr.header.l}};
        if (!tr.outcome_detail.empty()) summary["detail"] = tr.outcome_detail;
        std::cout << summary.dump(2) << "\n";
    }
    if (out_trace) *out_trace = std::move(tr);
    return 0;
}

int cmd_simulate(const std::string& config_path, bool seed_given, std::uint64_t seed,
                 const std::string& csv_path, const std::string& jsonl_path) {
    auto config = cfg::load_config(config_path);
    if (seed_given) {
        config.seed = seed;
        config.seed_set = true;
    }
    if (!config.seed_set) throw config_invalid_error("simulate needs --seed or run.seed");
    return run_one(std::move(config), csv_path, jsonl_path, false, nullptr);
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values, bool seed_given, std::uint64_t base_seed,
              const std::string& out_dir) {
    namespace fs = std::filesystem;
    const auto table_base = toml::load_toml(config_path);
    const std::string base_dir = fs::path(config_path).parent_path().string();
    std::ifstream f(config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string echo = ss.str();

    std::vector<std::string> axis = split_csv_list(values);
    if (param.empty() != axis.empty())
        throw config_invalid_error("--param and --values go together");
    if (axis.empty()) axis.push_back("");  // single run on the unmodified config

    fs::create_directories(out_dir);
    std::ofstream summary(fs::path(out_dir) / "summary.csv");
    if (!summary) throw io_error("cannot open sweep summary");
    summary << "index,param,value,seed,outcome,final_diameter,final_max_dist,gap\n";
    summary << std::setprecision(17);

    int failures = 0;
    for (std::size_t idx = 0; idx < axis.size(); ++idx) {
        auto table = table_base;
        if (!param.empty()) toml::set_value(table, param, axis[idx]);
        const std::string tag = "run_" + std::to_string(idx);
        summary << idx << "," << param << "," << axis[idx] << ",";
        try {
            auto config = cfg::parse_config(table, echo, base_dir);
            if (seed_given) {
                config.seed = base_seed + idx;
                config.seed_set = true;
            } else if (config.seed_set) {
                config.seed += idx;
            } else {
                throw config_invalid_error("sweep needs --seed or run.seed");
            }
            summary << config.seed << ",";
            trace::RunTrace tr;
            run_one(config, (fs::path(out_dir) / (tag + ".csv")).string(),
                    (fs::path(out_dir) / (tag + ".jsonl")).string(), true, &tr);
            std::vector<std::vector<double>> finals;
            for (int i : tr.header.normal) finals.push_back(tr.final_states[i]);
            summary << (tr.outcome == trace::RunOutcome::completed ? "completed"
                                                                   : "pick-infeasible")
                    << "," << metrics::consensus_diameter(finals) << ",";
            try {
                const auto xstar = obj::optimal_set(tr.objectives, tr.header.normal);
                double max_dist = 0.0;
                for (const auto& x : finals)
                    max_dist = std::max(max_dist, obj::distance_to_optimal(x, xstar));
                summary << max_dist << ",";
                if (!tr.records.empty())
                    summary << metrics::optimality_gap(tr,
                                                       static_cast<int>(tr.records.size()));
            } catch (const std::exception&) {
                summary << ",";
            }
            summary << "\n";
        } catch (const std::exception& e) {
            ++failures;
            summary << ",error,,,\n";
            std::cerr << tag << " failed: " << e.what() << "\n";
        }
    }
    std::cout << "sweep summary: " << (fs::path(out_dir) / "summary.csv").string() << "\n";
    return failures == static_cast<int>(axis.size()) && failures > 0 ? 4 : 0;
}

int cmd_analyze(const std::string& in_path, const std::string& report_path) {
    const auto tr = trace::read_trace_jsonl(in_path);
    json report{{"rounds", tr.records.size()},
                {"outcome", tr.outcome == trace::RunOutcome::completed ? "completed"
                                                                       : "pick-infeasible"},
                {"header",
                 json{{"n", tr.header.n},
                      {"d", tr.header.d},
                      {"beta", tr.header.beta},
                      {"seed", tr.header.seed},
                      {"eta", tr.header.eta},
                      {"lambda", tr.header.lambda},
                      {"kappa", tr.header.kappa},
                      {"l", tr.header.l},
                      {"schedule", tr.header.schedule},
                      {"update_rule", tr.header.update_rule}}}};

    std::vector<std::vector<double>> finals;
    for (int i : tr.header.normal) finals.push_back(tr.final_states[i]);
    report["final_diameter"] = metrics::consensus_diameter(finals);
    try {
        const auto xstar = obj::optimal_set(tr.objectives, tr.header.normal);
        double max_dist = 0.0;
        for (const auto& x : finals)
            max_dist = std::max(max_dist, obj::distance_to_optimal(x, xstar));
        report["final_max_dist_to_optimal"] = max_dist;
        if (!tr.records.empty())
            report["gap"] = metrics::optimality_gap(tr, static_cast<int>(tr.records.size()));
    } catch (const std::exception& e) {
        report["gap_note"] = e.what();
    }

    if (!tr.records.empty()) {
        const auto cont = metrics::containment_report(tr);
        report["containment"] = json{{"all_contained", cont.all_contained},
                                     {"checked", cont.checked}};
        if (!cont.all_contained) {
            report["containment"]["first_violation_round"] = cont.first_violation_round;
            report["containment"]["first_violation_agent"] = cont.first_violation_agent;
        }
    }

    if (tr.header.update_rule == "hull-pick" && !tr.records.empty()) {
        const auto ws = metrics::reconstruct_weights(tr);
        long rows = 0, decomposed = 0, certified = 0;
        double max_row_drift = 0.0;
        for (const auto& est : ws)
            for (std::size_t r = 0; r < est.row_decomposed.size(); ++r) {
                ++rows;
                if (est.row_decomposed[r]) {
                    ++decomposed;
                    double sum = 0.0;
                    for (int c = 0; c < est.w.n; ++c) sum += est.w.at(static_cast<int>(r), c);
                    max_row_drift = std::max(max_row_drift, std::abs(sum - 1.0));
                }
                if (est.row_eta_certified[r]) ++certified;
            }
        json wj{{"rows", rows},
                {"decomposed", decomposed},
                {"eta_certified", certified},
                {"max_row_sum_drift", max_row_drift}};
        const int nh = static_cast<int>(tr.header.normal.size());
        if (nh >= 2) {
            const std::size_t win = static_cast<std::size_t>(nh - 1);
            double worst_mu = -1.0;
            bool all_windows = true;
            for (std::size_t start = 0; start + win <= ws.size(); ++start) {
                try {
                    worst_mu = std::max(worst_mu, metrics::windowed_mu(ws, start, win));
                } catch (const incomplete_decomposition_error&) {
                    all_windows = false;
                }
            }
            if (worst_mu >= 0.0) {
                wj["max_windowed_mu"] = worst_mu;
                wj["mu_bound"] = 1.0 - std::pow(tr.header.eta, nh - 1);
                wj["all_windows_decomposed"] = all_windows;
            }
        }
        report["weights"] = wj;
    }

    std::ofstream out(report_path);
    if (!out) throw io_error("cannot open report output: " + report_path);
    out << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const int cap = thread_cap(); cap > 0) omp_set_num_threads(cap);
#endif
    CLI::App app{"resilient distributed subgradient toolkit"};
    app.require_subcommand(1);

    std::string graph_path, objectives_path, points_path, config_path, in_path;
    std::string csv_path, jsonl_path, report_path, out_dir, param, values;
    std::string policy = "automatic";
    int r = 0, s = 0, k = 0, d = 1, beta = 0;
    std::uint64_t seed = 0, samples = 0, sample_seed = 0;
    bool seed_given = false;

    auto* graph_cmd = app.add_subcommand("graph", "directed graph analysis");
    auto* check = graph_cmd->add_subcommand("check-resilient", "certify (r, s)-resilience");
    check->add_option("--graph", graph_path)->required();
    check->add_option("-r", r)->required();
    check->add_option("-s", s)->required();
    auto* kappa = graph_cmd->add_subcommand("kappa-rs", "minimum root count over reductions");
    kappa->add_option("--graph", graph_path)->required();
    kappa->add_option("-r", r)->required();
    kappa->add_option("-s", s)->required();
    kappa->add_option("--sample", samples, "spot-check this many random reductions instead");
    kappa->add_option("--seed", sample_seed, "sampling seed");

    auto* obj_cmd = app.add_subcommand("objectives", "objective set analysis");
    auto* red = obj_cmd->add_subcommand("check-redundancy", "certify k-redundancy");
    red->add_option("--objectives", objectives_path)->required();
    red->add_option("-k", k)->required();

    auto* geom_cmd = app.add_subcommand("geom", "hull intersection tools");
    auto* pick = geom_cmd->add_subcommand("pick", "trimmed hull-intersection picks");
    pick->add_option("--points", points_path)->required();
    pick->add_option("--d", d);
    pick->add_option("--beta", beta);
    pick->add_option("--policy", policy, "automatic | lp | midpoint");

    auto* sim = app.add_subcommand("simulate", "run one experiment from a config");
    sim->add_option("--config", config_path)->required();
    auto* sim_seed = sim->add_option("--seed", seed, "overrides run.seed");
    sim->add_option("--out", csv_path, "csv trace output");
    sim->add_option("--jsonl", jsonl_path, "full jsonl trace output");

    auto* sweep = app.add_subcommand("sweep", "run a config across parameter values");
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("--param", param, "dotted config key, e.g. run.T");
    sweep->add_option("--values", values, "comma-separated override values");
    auto* sweep_seed = sweep->add_option("--seed", seed, "base seed; run i uses base + i");
    sweep->add_option("--out-dir", out_dir)->required();

    auto* analyze = app.add_subcommand("analyze", "post-process traces");
    auto* analyze_trace = analyze->add_subcommand("trace", "summarize a jsonl trace");
    analyze_trace->add_option("--in", in_path)->required();
    analyze_trace->add_option("--report", report_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }
    seed_given = sim_seed->count() > 0 || sweep_seed->count() > 0;

    try {
        if (check->parsed()) return cmd_check_resilient(graph_path, r, s);
        if (kappa->parsed()) return cmd_kappa(graph_path, r, s, samples, sample_seed);
        if (red->parsed()) return cmd_check_redundancy(objectives_path, k);
        if (pick->parsed()) return cmd_pick(points_path, d, beta, policy);
        if (sim->parsed())
            return cmd_simulate(config_path, seed_given, seed, csv_path, jsonl_path);
        if (sweep->parsed())
            return cmd_sweep(config_path, param, values, seed_given, seed, out_dir);
        if (analyze_trace->parsed()) return cmd_analyze(in_path, report_path);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const byzgrad::hypothesis_failed_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const byzgrad::not_resilient_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const byzgrad::infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const byzgrad::empty_zero_set_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const byzgrad::not_converged_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
