#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "passync/config.hpp"

using namespace passync;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("empty object parses to defaults") {
    ScenarioConfig cfg = parse_config_json("{}");
    CHECK(cfg.topology.kind == Topology::Star);
    CHECK(cfg.topology.m == 8);
    CHECK(cfg.controller == ControllerKind::Spr);
    CHECK(cfg.leader.kind == LeaderKind::PaperSinusoid);
    CHECK(cfg.dist.kind == DisturbKind::None);
    CHECK(cfg.integ.dt == 1e-3);
    CHECK(cfg.integ.T == 30.0);
    CHECK_FALSE(cfg.spr_gains.has_value());
}

TEST_CASE("serialize -> parse -> serialize is a fixed point") {
    ScenarioConfig cfg = parse_config_json(R"({
        "name": "roundtrip",
        "topology": {"kind": "arbitrary", "m": 8,
                     "removed_groups": ["I", "III"]},
        "controller": {"kind": "nonspr-s2"},
        "disturbance": {"kind": "d3", "scale": [1, 1, 1, 1, 1, 1, 1, 0.5]},
        "integrator": {"dt": 0.002, "T": 12.5, "stride": 50},
        "monitor_lyapunov": true
    })");
    CHECK(cfg.topology.removed_groups.size() == 2);
    CHECK(cfg.controller == ControllerKind::NonSprS2);
    CHECK(cfg.dist.scale.back() == 0.5);
    std::string s1 = serialize_config(cfg);
    ScenarioConfig back = parse_config_json(s1);
    std::string s2 = serialize_config(back);
    CHECK(s1 == s2);
    CHECK(back.integ.T == 12.5);
    CHECK(back.monitor_lyapunov);
}

TEST_CASE("explicit gains, custom leader/disturbance, overrides survive round trip") {
    ScenarioConfig cfg = parse_config_json(R"({
        "topology": {"kind": "cyclic", "m": 4, "leader_weight": 0.15},
        "plant": {"paper": false, "J": [1, 1, 1, 1], "B": [0.5, 0.5, 0.5, 0.5]},
        "controller": {"kind": "spr",
                       "spr": {"Phi": [2, 2, 2, 2], "Lam": [1, 1, 1, 1],
                               "G1": [5, 5, 5, 5], "G2": [5, 5, 5, 5]}},
        "leader": {"kind": "custom", "terms": [[1.0, 0.0, 2.0]]},
        "disturbance": {"kind": "custom", "c": 0.25}
    })");
    CHECK_FALSE(cfg.use_paper_params);
    CHECK(cfg.J.size() == 4);
    REQUIRE(cfg.spr_gains.has_value());
    CHECK(cfg.spr_gains->Phi[3] == 2.0);
    REQUIRE(cfg.topology.leader_weight_override.has_value());
    CHECK(*cfg.topology.leader_weight_override == 0.15);
    ScenarioConfig back = parse_config_json(serialize_config(cfg));
    REQUIRE(back.leader.terms.size() == 1);
    CHECK(back.leader.terms[0].w == 2.0);
    CHECK(back.dist.c == 0.25);
    CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_CASE("custom topology edges round trip") {
    ScenarioConfig cfg = parse_config_json(R"({
        "topology": {"kind": "custom", "m": 2,
                     "custom_edges": [[1, 0, 1.0], [2, 1, 1.0]]}
    })");
    REQUIRE(cfg.topology.custom_edges.size() == 2);
    CHECK(cfg.topology.custom_edges[1].j == 1);
    ScenarioConfig back = parse_config_json(serialize_config(cfg));
    CHECK(back.topology.custom_edges.size() == 2);
}

TEST_CASE("invalid documents raise ConfigError") {
    CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"topology": {"kind": "moebius"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"topology": {"m": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"integrator": {"dt": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"controller": {"kind": "pid"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"disturbance": {"kind": "d9"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("writers produce well-formed files") {
    ScenarioConfig cfg = parse_config_json(
        R"({"topology": {"kind": "star", "m": 2}, "integrator": {"T": 1.0}})");
    RunResult res = simulate(cfg);
    const std::string csv = "/tmp/passync_test.csv";
    const std::string dat = "/tmp/passync_test.dat";
    const std::string met = "/tmp/passync_test_metrics.json";
    write_csv(res, csv);
    write_plotdata(res, dat);
    write_metrics(res, cfg, met);

    std::string header;
    {
        std::ifstream in(csv);
        std::getline(in, header);
    }
    CHECK(header == "t,x1,x2,e1,e2,est1,est2,est3,est4");
    // one data row per decimated sample
    std::string text = slurp(csv);
    size_t rows = 0;
    for (char c : text)
        if (c == '\n') ++rows;
    CHECK(rows == res.t.size() + 1);

    std::string dtext = slurp(dat);
    CHECK(dtext.rfind("# ", 0) == 0);

    std::string mtext = slurp(met);
    CHECK(mtext.find("\"steady_state_err\"") != std::string::npos);
    CHECK(mtext.find("\"sync_l2\"") != std::string::npos);
    CHECK(mtext.find("\"blowup\"") != std::string::npos);

    // determinism at the byte level: rerun and compare
    RunResult res2 = simulate(cfg);
    const std::string csv2 = "/tmp/passync_test2.csv";
    write_csv(res2, csv2);
    CHECK(slurp(csv) == slurp(csv2));

    std::remove(csv.c_str());
    std::remove(csv2.c_str());
    std::remove(dat.c_str());
    std::remove(met.c_str());
}
