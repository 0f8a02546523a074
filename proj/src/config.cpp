#include "passync/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace passync {

using nlohmann::json;

namespace {

Topology topology_from_name(const std::string& s) {
    if (s == "star") return Topology::Star;
    if (s == "cyclic") return Topology::Cyclic;
    if (s == "path" || s == "series") return Topology::Series;
    if (s == "arbitrary") return Topology::Arbitrary;
    if (s == "custom") return Topology::Custom;
    throw ConfigError("unknown topology: " + s);
}

ControllerKind controller_from_name(const std::string& s) {
    if (s == "spr") return ControllerKind::Spr;
    if (s == "nonspr-s1") return ControllerKind::NonSprS1;
    if (s == "nonspr-s2") return ControllerKind::NonSprS2;
    throw ConfigError("unknown controller: " + s);
}

LeaderKind leader_from_name(const std::string& s) {
    if (s == "paper") return LeaderKind::PaperSinusoid;
    if (s == "constant") return LeaderKind::Constant;
    if (s == "zero") return LeaderKind::Zero;
    if (s == "custom") return LeaderKind::Custom;
    throw ConfigError("unknown leader kind: " + s);
}

std::string leader_name(LeaderKind k) {
    switch (k) {
        case LeaderKind::PaperSinusoid:
            return "paper";
        case LeaderKind::Constant:
            return "constant";
        case LeaderKind::Zero:
            return "zero";
        case LeaderKind::Custom:
            return "custom";
    }
    return "?";
}

DisturbKind dist_from_name(const std::string& s) {
    if (s == "none") return DisturbKind::None;
    if (s == "d1") return DisturbKind::D1;
    if (s == "d2") return DisturbKind::D2;
    if (s == "d3") return DisturbKind::D3;
    if (s == "custom") return DisturbKind::Custom;
    throw ConfigError("unknown disturbance kind: " + s);
}

std::string dist_name(DisturbKind k) {
    switch (k) {
        case DisturbKind::None:
            return "none";
        case DisturbKind::D1:
            return "d1";
        case DisturbKind::D2:
            return "d2";
        case DisturbKind::D3:
            return "d3";
        case DisturbKind::Custom:
            return "custom";
    }
    return "?";
}

std::vector<SinTerm> terms_from_json(const json& j) {
    std::vector<SinTerm> terms;
    for (const auto& t : j) terms.push_back({t.at(0), t.at(1), t.at(2)});
    return terms;
}

json terms_to_json(const std::vector<SinTerm>& terms) {
    json j = json::array();
    for (const auto& t : terms) j.push_back({t.a, t.b, t.w});
    return j;
}

}  // namespace

ScenarioConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("JSON parse error: ") + ex.what());
    }
    try {
        ScenarioConfig cfg;
        cfg.name = j.value("name", cfg.name);
        if (j.contains("topology")) {
            const json& t = j["topology"];
            cfg.topology.kind = topology_from_name(t.value("kind", "star"));
            cfg.topology.m = t.value("m", 8);
            if (t.contains("leader_weight"))
                cfg.topology.leader_weight_override = t["leader_weight"].get<double>();
            cfg.topology.partial_access = t.value("partial_access", -1);
            if (t.contains("removed_groups"))
                cfg.topology.removed_groups =
                    t["removed_groups"].get<std::vector<std::string>>();
            if (t.contains("custom_edges"))
                for (const auto& e : t["custom_edges"])
                    cfg.topology.custom_edges.push_back(
                        {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
        }
        if (j.contains("plant")) {
            const json& p = j["plant"];
            cfg.use_paper_params = p.value("paper", true);
            if (p.contains("J")) cfg.J = p["J"].get<Vec>();
            if (p.contains("B")) cfg.B = p["B"].get<Vec>();
        }
        if (j.contains("controller")) {
            const json& c = j["controller"];
            cfg.controller = controller_from_name(c.value("kind", "spr"));
            if (c.contains("spr")) {
                SprGains g;
                g.Phi = c["spr"].at("Phi").get<Vec>();
                g.Lam = c["spr"].at("Lam").get<Vec>();
                g.G1 = c["spr"].at("G1").get<Vec>();
                g.G2 = c["spr"].at("G2").get<Vec>();
                cfg.spr_gains = g;
            }
            if (c.contains("comp")) {
                const json& q = c["comp"];
                CompensatorParams cp;
                cp.Phi = q.at("Phi").get<Vec>();
                cp.p = q.at("p").get<Vec>();
                cp.q = q.at("q").get<Vec>();
                cp.Th = q.at("Th").get<Vec>();
                cp.th0 = q.at("th0").get<double>();
                cp.Ks = q.at("Ks").get<Vec>();
                cp.G1 = q.at("G1").get<Vec>();
                cp.G2 = q.at("G2").get<Vec>();
                cp.G3 = q.at("G3").get<Vec>();
                cfg.comp = cp;
            }
        }
        if (j.contains("leader")) {
            const json& l = j["leader"];
            cfg.leader.kind = leader_from_name(l.value("kind", "paper"));
            cfg.leader.c = l.value("c", 0.0);
            if (l.contains("terms")) cfg.leader.terms = terms_from_json(l["terms"]);
        }
        if (j.contains("disturbance")) {
            const json& d = j["disturbance"];
            cfg.dist.kind = dist_from_name(d.value("kind", "none"));
            cfg.dist.c = d.value("c", 0.0);
            if (d.contains("terms")) cfg.dist.terms = terms_from_json(d["terms"]);
            if (d.contains("scale")) cfg.dist.scale = d["scale"].get<Vec>();
        }
        if (j.contains("integrator")) {
            const json& g = j["integrator"];
            cfg.integ.dt = g.value("dt", 1e-3);
            cfg.integ.T = g.value("T", 30.0);
            cfg.integ.stride = g.value("stride", 100);
        }
        cfg.monitor_lyapunov = j.value("monitor_lyapunov", false);
        if (j.contains("x_init")) cfg.x_init = j["x_init"].get<Vec>();
        if (j.contains("v_init")) cfg.v_init = j["v_init"].get<Vec>();
        validate_config(cfg);
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("config schema error: ") + ex.what());
    }
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    json t;
    t["kind"] = topology_name(cfg.topology.kind);
    t["m"] = cfg.topology.m;
    if (cfg.topology.leader_weight_override)
        t["leader_weight"] = *cfg.topology.leader_weight_override;
    if (cfg.topology.partial_access >= 0) t["partial_access"] = cfg.topology.partial_access;
    if (!cfg.topology.removed_groups.empty()) t["removed_groups"] = cfg.topology.removed_groups;
    if (!cfg.topology.custom_edges.empty()) {
        json ce = json::array();
        for (const auto& e : cfg.topology.custom_edges) ce.push_back({e.i, e.j, e.w});
        t["custom_edges"] = ce;
    }
    j["topology"] = t;
    json p;
    p["paper"] = cfg.use_paper_params;
    if (!cfg.J.empty()) p["J"] = cfg.J;
    if (!cfg.B.empty()) p["B"] = cfg.B;
    j["plant"] = p;
    json c;
    c["kind"] = controller_name(cfg.controller);
    if (cfg.spr_gains) {
        c["spr"] = {{"Phi", cfg.spr_gains->Phi},
                    {"Lam", cfg.spr_gains->Lam},
                    {"G1", cfg.spr_gains->G1},
                    {"G2", cfg.spr_gains->G2}};
    }
    if (cfg.comp) {
        c["comp"] = {{"Phi", cfg.comp->Phi}, {"p", cfg.comp->p},   {"q", cfg.comp->q},
                     {"Th", cfg.comp->Th},   {"th0", cfg.comp->th0}, {"Ks", cfg.comp->Ks},
                     {"G1", cfg.comp->G1},   {"G2", cfg.comp->G2},  {"G3", cfg.comp->G3}};
    }
    j["controller"] = c;
    json l;
    l["kind"] = leader_name(cfg.leader.kind);
    if (cfg.leader.kind == LeaderKind::Constant) l["c"] = cfg.leader.c;
    if (!cfg.leader.terms.empty()) l["terms"] = terms_to_json(cfg.leader.terms);
    j["leader"] = l;
    json d;
    d["kind"] = dist_name(cfg.dist.kind);
    if (cfg.dist.kind == DisturbKind::Custom) d["c"] = cfg.dist.c;
    if (!cfg.dist.terms.empty()) d["terms"] = terms_to_json(cfg.dist.terms);
    if (!cfg.dist.scale.empty()) d["scale"] = cfg.dist.scale;
    j["disturbance"] = d;
    j["integrator"] = {{"dt", cfg.integ.dt}, {"T", cfg.integ.T}, {"stride", cfg.integ.stride}};
    j["monitor_lyapunov"] = cfg.monitor_lyapunov;
    if (!cfg.x_init.empty()) j["x_init"] = cfg.x_init;
    if (!cfg.v_init.empty()) j["v_init"] = cfg.v_init;
    return j.dump(2) + "\n";
}

namespace {

void write_rows(std::ostream& os, const RunResult& res) {
    os << std::setprecision(17);
    const size_t nx = res.x.empty() ? 0 : res.x[0].size();
    const size_t ne = res.e.empty() ? 0 : res.e[0].size();
    const size_t nq = res.est.empty() ? 0 : res.est[0].size();
    os << "t";
    for (size_t i = 0; i < nx; ++i) os << ",x" << i + 1;
    for (size_t i = 0; i < ne; ++i) os << ",e" << i + 1;
    for (size_t i = 0; i < nq; ++i) os << ",est" << i + 1;
    os << "\n";
    for (size_t k = 0; k < res.t.size(); ++k) {
        os << res.t[k];
        for (double v : res.x[k]) os << "," << v;
        for (double v : res.e[k]) os << "," << v;
        for (double v : res.est[k]) os << "," << v;
        os << "\n";
    }
}

}  // namespace

void write_csv(const RunResult& res, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_rows(os, res);
}

void write_plotdata(const RunResult& res, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# gnuplot: plot 'this-file' using 1:2 with lines  (columns: t, x_i..., e_i..., "
          "est_j...)\n";
    write_rows(os, res);
}

void write_metrics(const RunResult& res, const ScenarioConfig& cfg, const std::string& path) {
    json j;
    j["scenario"] = cfg.name;
    j["sync_l2"] = res.sync_l2;
    j["steady_state_err"] = res.steady_state_err;
    j["estimate_final"] = res.estimate_final;
    j["estimate_max"] = res.estimate_max;
    j["wall_clock_seconds"] = res.wall_clock_seconds;
    j["blowup"] = res.blowup;
    if (res.blowup) j["blowup_time"] = res.blowup_time;
    if (!res.lyap.empty()) j["lyapunov_max_step_increase"] = res.lyap_max_step_increase;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
}

}  // namespace passync
