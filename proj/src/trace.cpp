#include "byzgrad/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "byzgrad/errors.hpp"

namespace byzgrad::trace {

using nlohmann::json;

const std::vector<std::vector<double>>& states_at(const RunTrace& tr, int t) {
    const int T = static_cast<int>(tr.records.size());
    if (t < 0 || t > T) throw invalid_params_error("round index outside the trace");
    return t == T ? tr.final_states : tr.records[t].x;
}

namespace {

double diameter_of(const std::vector<std::vector<double>>& states,
                   const std::vector<int>& ids) {
    double best = 0.0;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            double s = 0.0;
            const auto& u = states[ids[a]];
            const auto& v = states[ids[b]];
            for (std::size_t c = 0; c < u.size(); ++c) s += (u[c] - v[c]) * (u[c] - v[c]);
            best = std::max(best, std::sqrt(s));
        }
    return best;
}

}  // namespace

void write_trace_csv(const RunTrace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open csv output: " + path);
    out << std::setprecision(17);
    out << "t,alpha,diameter,max_dist_to_Xstar,gap\n";

    bool have_xstar = true;
    obj::OptimalSet xstar;
    try {
        xstar = obj::optimal_set(tr.objectives, tr.header.normal);
    } catch (const std::exception&) {
        have_xstar = false;
    }

    const auto& normal = tr.header.normal;
    std::vector<std::vector<double>> run_sum(normal.size(),
                                             std::vector<double>(tr.header.d, 0.0));
    const int T = static_cast<int>(tr.records.size());
    for (int t = 0; t <= T; ++t) {
        const auto& x = states_at(tr, t);
        out << t << ",";
        if (t < T) out << tr.records[t].alpha;
        out << "," << diameter_of(x, normal) << ",";
        if (have_xstar) {
            double max_dist = 0.0, gap = 0.0;
            for (std::size_t s = 0; s < normal.size(); ++s) {
                const auto& xi = x[normal[s]];
                max_dist = std::max(max_dist, obj::distance_to_optimal(xi, xstar));
                for (int c = 0; c < tr.header.d; ++c) run_sum[s][c] += xi[c];
                std::vector<double> avg(tr.header.d);
                for (int c = 0; c < tr.header.d; ++c)
                    avg[c] = run_sum[s][c] / static_cast<double>(t + 1);
                gap = std::max(gap, obj::sum_value(tr.objectives, normal, avg));
            }
            const double fstar =
                obj::sum_value(tr.objectives, normal, obj::representative_point(xstar));
            out << max_dist << "," << (gap - fstar);
        } else {
            out << ",";
        }
        out << "\n";
    }
}

namespace {

json pick_to_json(const geom::PickResult& p) {
    return json{{"point", p.point},
                {"weights", p.cert.hull_weights},
                {"residual", p.cert.max_residual}};
}

geom::PickResult pick_from_json(const json& j) {
    geom::PickResult p;
    p.point = j.at("point").get<std::vector<double>>();
    p.cert.hull_weights = j.at("weights").get<std::vector<std::vector<double>>>();
    p.cert.max_residual = j.at("residual").get<double>();
    return p;
}

json update_to_json(const proto::NormalUpdate& u) {
    json picks = json::array();
    for (const auto& p : u.picks) picks.push_back(pick_to_json(p));
    return json{{"v", u.v},
                {"x_next", u.x_next},
                {"a_sets", u.a_sets},
                {"a_count", u.a_count},
                {"picks", std::move(picks)}};
}

proto::NormalUpdate update_from_json(const json& j) {
    proto::NormalUpdate u;
    u.v = j.at("v").get<std::vector<double>>();
    u.x_next = j.at("x_next").get<std::vector<double>>();
    u.a_sets = j.at("a_sets").get<std::vector<std::vector<int>>>();
    u.a_count = j.at("a_count").get<std::uint64_t>();
    for (const auto& p : j.at("picks")) u.picks.push_back(pick_from_json(p));
    return u;
}

json header_to_json(const TraceHeader& h) {
    return json{{"seed", h.seed},
                {"n", h.n},
                {"d", h.d},
                {"beta", h.beta},
                {"horizon", h.horizon},
                {"byzantine", h.byzantine},
                {"normal", h.normal},
                {"eta", h.eta},
                {"lambda", h.lambda},
                {"kappa", h.kappa},
                {"l", h.l},
                {"schedule", h.schedule},
                {"pick_policy", h.pick_policy},
                {"update_rule", h.update_rule},
                {"init_box_lo", h.init_box_lo},
                {"init_box_hi", h.init_box_hi},
                {"config_echo", h.config_echo}};
}

TraceHeader header_from_json(const json& j) {
    TraceHeader h;
    h.seed = j.at("seed").get<std::uint64_t>();
    h.n = j.at("n").get<int>();
    h.d = j.at("d").get<int>();
    h.beta = j.at("beta").get<int>();
    h.horizon = j.at("horizon").get<int>();
    h.byzantine = j.at("byzantine").get<std::vector<int>>();
    h.normal = j.at("normal").get<std::vector<int>>();
    h.eta = j.at("eta").get<double>();
    h.lambda = j.at("lambda").get<double>();
    h.kappa = j.at("kappa").get<int>();
    h.l = j.at("l").get<int>();
    h.schedule = j.at("schedule").get<std::string>();
    h.pick_policy = j.at("pick_policy").get<std::string>();
    h.update_rule = j.at("update_rule").get<std::string>();
    h.init_box_lo = j.at("init_box_lo").get<std::vector<double>>();
    h.init_box_hi = j.at("init_box_hi").get<std::vector<double>>();
    h.config_echo = j.at("config_echo").get<std::string>();
    return h;
}

}  // namespace

void write_trace_jsonl(const RunTrace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open jsonl output: " + path);

    json head = header_to_json(tr.header);
    head["type"] = "header";
    head["graph"] = json::parse(graph::graph_to_json(tr.g));
    head["objectives"] = json::parse(obj::objectives_to_json(tr.objectives));
    out << head.dump() << "\n";

    for (const auto& rec : tr.records) {
        json msgs = json::array();
        for (const auto& [edge, val] : rec.messages)
            msgs.push_back(json::array({edge.first, edge.second, val}));
        json ups = json::object();
        for (const auto& [i, u] : rec.updates) ups[std::to_string(i)] = update_to_json(u);
        json line{{"type", "round"}, {"t", rec.t},        {"alpha", rec.alpha},
                  {"x", rec.x},      {"messages", msgs},  {"updates", ups}};
        out << line.dump() << "\n";
    }

    json tail{{"type", "final"},
              {"x", tr.final_states},
              {"outcome", tr.outcome == RunOutcome::completed ? "completed" : "pick-infeasible"},
              {"detail", tr.outcome_detail}};
    out << tail.dump() << "\n";
}

RunTrace read_trace_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open trace: " + path);
    RunTrace tr;
    std::string line;
    bool saw_header = false, saw_final = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw io_error(std::string("bad trace line: ") + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            tr.header = header_from_json(j);
            tr.g = graph::parse_graph_json(j.at("graph").dump());
            tr.objectives = obj::parse_objectives_json(j.at("objectives").dump());
            saw_header = true;
        } else if (type == "round") {
            proto::RoundRecord rec;
            rec.t = j.at("t").get<int>();
            rec.alpha = j.at("alpha").get<double>();
            rec.x = j.at("x").get<std::vector<std::vector<double>>>();
            for (const auto& m : j.at("messages"))
                rec.messages.push_back(
                    {{m.at(0).get<int>(), m.at(1).get<int>()}, m.at(2).get<std::vector<double>>()});
            for (const auto& [key, val] : j.at("updates").items())
                rec.updates.emplace(std::stoi(key), update_from_json(val));
            tr.records.push_back(std::move(rec));
        } else if (type == "final") {
            tr.final_states = j.at("x").get<std::vector<std::vector<double>>>();
            tr.outcome = j.at("outcome").get<std::string>() == "completed"
                             ? RunOutcome::completed
                             : RunOutcome::pick_infeasible;
            tr.outcome_detail = j.at("detail").get<std::string>();
            saw_final = true;
        } else {
            throw io_error("unknown trace line type: " + type);
        }
    }
    if (!saw_header || !saw_final) throw io_error("trace is missing its header or final line");
    std::sort(tr.records.begin(), tr.records.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < tr.records.size(); ++i)
        if (tr.records[i].t != static_cast<int>(i))
            throw io_error("trace rounds are not contiguous from 0");
    return tr;
}

}  // namespace byzgrad::trace
