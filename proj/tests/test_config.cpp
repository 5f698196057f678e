#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "byzgrad/bounds.hpp"
#include "byzgrad/config.hpp"
#include "byzgrad/errors.hpp"
#include "byzgrad/toml_lite.hpp"
#include "doctest.h"

using namespace byzgrad;

namespace {

namespace fs = std::filesystem;

const char* k4_json = R"({"n": 4, "edges": [[0,1],[0,2],[0,3],[1,0],[1,2],[1,3],[2,0],[2,1],[2,3],[3,0],[3,1],[3,2]]})";
const char* shared_balls = R"([
  {"family": "ball-hinge", "center": [0.0], "radius": 1.0},
  {"family": "ball-hinge", "center": [0.0], "radius": 1.0},
  {"family": "ball-hinge", "center": [0.0], "radius": 1.0},
  {"family": "ball-hinge", "center": [0.0], "radius": 1.0}
])";

struct Workspace {
    fs::path dir;

    Workspace() {
        static int counter = 0;
        dir = fs::temp_directory_path() /
              ("byzgrad_cfg_" + std::to_string(++counter) + "_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }
};

cfg::ExperimentConfig from_text(const std::string& text) {
    return cfg::parse_config(toml::parse_toml(text), text, "");
}

const char* minimal = "[graph]\npath = \"g.json\"\n[objectives]\npath = \"o.json\"\n";

}  // namespace

TEST_CASE("toml subset parsing") {
    auto t = toml::parse_toml("top = 1\n"
                              "[run]  # trailing comment\n"
                              "T = 1_000\n"
                              "name = \"a # not a comment\"\n"
                              "flag = true\n"
                              "box = [1.0, 2.5, -3]\n"
                              "[adversary.2]\n"
                              "kind = \"constant\"\n");
    CHECK(t.get_int("top", 0) == 1);
    CHECK(t.get_int("run.T", 0) == 1000);
    CHECK(t.get_string("run.name") == "a # not a comment");
    CHECK(t.get_bool("run.flag", false));
    CHECK(t.get("run.box").as_double_array("run.box") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK(t.keys_under("adversary") == std::vector<std::string>{"2.kind"});
    CHECK(t.get_double("absent", 7.5) == 7.5);
    CHECK_THROWS_AS(t.get("absent"), config_invalid_error);

    CHECK_THROWS_AS(toml::parse_toml("just words\n"), config_invalid_error);
    CHECK_THROWS_AS(toml::parse_toml("a = 1\na = 2\n"), config_invalid_error);
    CHECK_THROWS_AS(toml::parse_toml("a = \"unterminated\n"), config_invalid_error);
    CHECK_THROWS_AS(toml::parse_toml("a = [1, [2]]\n"), config_invalid_error);
    CHECK_THROWS_AS(toml::parse_toml("a = zebra\n"), config_invalid_error);
    CHECK_THROWS_AS(toml::parse_toml("[bad..name]\n"), config_invalid_error);

    toml::set_value(t, "run.T", "50");
    CHECK(t.get_int("run.T", 0) == 50);
    toml::set_value(t, "run.box", "[9.0]");
    CHECK(t.get("run.box").as_double_array("run.box") == std::vector<double>{9.0});
    CHECK_THROWS_AS(toml::set_value(t, "run.T", "not a number"), config_invalid_error);
}

TEST_CASE("config defaults") {
    auto cfg = from_text(minimal);
    CHECK(cfg.graph_path == "g.json");
    CHECK(cfg.objectives_path == "o.json");
    CHECK(cfg.d == 1);
    CHECK(cfg.beta == 0);
    CHECK(cfg.T == 0);
    CHECK(!cfg.seed_set);
    CHECK(cfg.schedule.kind == proto::ScheduleKind::harmonic);
    CHECK(cfg.schedule.a0 == 1.0);
    CHECK(cfg.policy == geom::PickPolicy::automatic);
    CHECK(cfg.rule == proto::UpdateRule::hull_pick);
    CHECK(!cfg.require_resilient);
    CHECK(cfg.init_box_lo == std::vector<double>{0.0});
    CHECK(cfg.init_box_hi == std::vector<double>{1.0});
    CHECK(cfg.adversaries.empty());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nwat = 1\n"), config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "stray = 1\n"), config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nd = 0\n"), config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nseed = -3\n"),
                    config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nschedule = \"warp\"\n"),
                    config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nschedule = \"fixed\"\n"),
                    config_invalid_error);  // fixed needs T >= 1
    CHECK_THROWS_AS(
        from_text(std::string(minimal) + "[run]\nschedule = \"fixed\"\nT = 10\na0 = 2.0\n"),
        config_invalid_error);
    CHECK_THROWS_AS(
        from_text(std::string(minimal) + "[run]\ninit_box_lo = [2.0]\ninit_box_hi = [1.0]\n"),
        config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[run]\nd = 2\ninit_box_lo = [0.0, 0.0, 0.0]\n"),
                    config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[adversary.x]\nkind = \"constant\"\n"),
                    config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[adversary.1]\nflavor = \"hot\"\n"),
                    config_invalid_error);
    CHECK_THROWS_AS(from_text(std::string(minimal) + "[init]\n0 = [1.0, 2.0]\n"),
                    config_invalid_error);  // d = 1

    auto ok = from_text(std::string(minimal) +
                        "[adversary.2]\nkind = \"uniform-noise\"\nbox_lo = -1.0\nbox_hi = 1.0\n"
                        "[run]\nd = 2\nschedule = \"fixed\"\nT = 16\n");
    REQUIRE(ok.adversaries.count(2) == 1);
    // scalars broadcast to the run dimension
    CHECK(ok.adversaries.at(2).box_lo == std::vector<double>{-1.0, -1.0});
    CHECK(ok.schedule.kind == proto::ScheduleKind::fixed);
    CHECK(ok.schedule.horizon == 16);
}

TEST_CASE("standing hypotheses on the complete graph") {
    Workspace ws;
    auto g = graph::load_graph_json(ws.write("g.json", k4_json));
    auto os = obj::load_objectives_json(ws.write("o.json", shared_balls));
    auto cfg = from_text(std::string(minimal) + "[run]\nd = 1\nbeta = 1\n");
    auto rep = cfg::validate_hypotheses(cfg, g, os);
    CHECK(rep.resilient);
    CHECK(rep.reductions_checked == 32);
    CHECK(rep.kappa == 2);
    CHECK(rep.required_redundancy == 2);
    CHECK(rep.redundancy_checked);
    CHECK(rep.redundant);
    CHECK_NOTHROW(cfg::enforce_requirements(cfg, rep));
}

TEST_CASE("a fragile graph fails the resilience hypothesis") {
    auto g = graph::DiGraph::from_arcs(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto os = obj::make_objective_set(
        {obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt}});
    auto cfg = from_text(std::string(minimal) + "[run]\nd = 1\nbeta = 1\n");
    auto rep = cfg::validate_hypotheses(cfg, g, os);
    CHECK(!rep.resilient);
    REQUIRE(rep.resilience_witness.has_value());
    CHECK(rep.resilience_witness->kept == std::vector<int>{0, 1, 2});
    CHECK(rep.kappa == 0);
    CHECK(!rep.redundancy_checked);
    CHECK(rep.notes.find("not") != std::string::npos);

    auto strict = cfg;
    strict.require_resilient = true;
    CHECK_THROWS_AS(cfg::enforce_requirements(strict, rep), hypothesis_failed_error);
    auto strict2 = cfg;
    strict2.require_redundant = true;
    CHECK_THROWS_AS(cfg::enforce_requirements(strict2, rep), hypothesis_failed_error);
}

TEST_CASE("redundancy failures are reported, not thrown") {
    Workspace ws;
    auto g = graph::load_graph_json(ws.write("g.json", k4_json));
    auto cfg = from_text(std::string(minimal) + "[run]\nd = 1\nbeta = 1\n");

    auto split = obj::make_objective_set(
        {obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {10.0}, 1.0, std::nullopt}});
    auto rep = cfg::validate_hypotheses(cfg, g, split);
    CHECK(rep.resilient);
    CHECK(rep.redundancy_checked);
    CHECK(!rep.redundant);
    CHECK(rep.notes.find("no common minimizer") != std::string::npos);

    auto mixed = obj::make_objective_set(
        {obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::ball_hinge, {0.0}, 1.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::quadratic, {0.0}, 0.0, std::nullopt},
         obj::ObjectiveSpec{obj::Family::quadratic, {0.0}, 0.0, std::nullopt}});
    auto rep2 = cfg::validate_hypotheses(cfg, g, mixed);
    CHECK(rep2.resilient);
    CHECK(!rep2.redundancy_checked);
    CHECK(rep2.notes.find("unsupported") != std::string::npos);
}

TEST_CASE("experiments are seed-reproducible") {
    Workspace ws;
    ws.write("g.json", k4_json);
    ws.write("o.json", shared_balls);
    const std::string config_text =
        "[graph]\npath = \"g.json\"\n"
        "[objectives]\npath = \"o.json\"\n"
        "[adversary.3]\nkind = \"split-brain\"\nvalue = [0.0]\ndelta = 100.0\n"
        "[run]\nd = 1\nbeta = 1\nT = 5\nseed = 12\n"
        "init_box_lo = [2.0]\ninit_box_hi = [4.0]\nrequire_resilient = true\n";
    auto cfg = cfg::load_config(ws.write("exp.toml", config_text));
    CHECK(cfg.seed_set);
    CHECK(cfg.graph_path == (ws.dir / "g.json").string());

    auto t1 = cfg::run_experiment(cfg);
    auto t2 = cfg::run_experiment(cfg, 1);
    REQUIRE(t1.records.size() == 5);
    CHECK(t1.outcome == trace::RunOutcome::completed);
    CHECK(t1.final_states == t2.final_states);
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(t1.records[t].x == t2.records[t].x);
        CHECK(t1.records[t].messages == t2.records[t].messages);
    }

    CHECK(t1.header.seed == 12);
    CHECK(t1.header.normal == std::vector<int>{0, 1, 2});
    CHECK(t1.header.byzantine == std::vector<int>{3});
    CHECK(t1.header.eta == doctest::Approx(1.0 / 12.0));
    CHECK(t1.header.kappa == 2);
    CHECK(t1.header.l == (3 - 2 + 1) * (3 - 2) + 1);
    CHECK(t1.header.lambda == doctest::Approx(graph::lambda_rate(1.0 / 12.0, 3)));
    CHECK(t1.header.schedule == "harmonic(a0=1)");
    // seeded initial states land in the box
    for (int i = 0; i < 4; ++i) {
        CHECK(t1.records[0].x[i][0] >= 2.0);
        CHECK(t1.records[0].x[i][0] <= 4.0);
    }
}

TEST_CASE("explicit initial states and error paths") {
    Workspace ws;
    ws.write("g.json", k4_json);
    ws.write("o.json", shared_balls);
    const std::string base =
        "[graph]\npath = \"g.json\"\n"
        "[objectives]\npath = \"o.json\"\n"
        "[adversary.3]\nkind = \"constant\"\nvalue = [5.0]\n"
        "[run]\nd = 1\nbeta = 1\n";

    auto pinned = cfg::load_config(ws.write(
        "pinned.toml",
        base + "T = 0\nseed = 1\n[init]\n0 = [1.0]\n1 = [2.0]\n2 = [3.0]\n3 = [4.0]\n"));
    auto tr = cfg::run_experiment(pinned);
    CHECK(tr.records.empty());
    CHECK(tr.final_states ==
          std::vector<std::vector<double>>{{1.0}, {2.0}, {3.0}, {4.0}});
    CHECK(tr.header.init_box_lo.empty());

    auto no_seed = cfg::load_config(ws.write("no_seed.toml", base + "T = 2\n"));
    CHECK_THROWS_AS(cfg::run_experiment(no_seed), config_invalid_error);

    auto partial = cfg::load_config(
        ws.write("partial.toml", base + "T = 1\nseed = 1\n[init]\n0 = [1.0]\n"));
    CHECK_THROWS_AS(cfg::run_experiment(partial), config_invalid_error);

    CHECK_THROWS_AS(cfg::load_config((ws.dir / "absent.toml").string()), io_error);
}
