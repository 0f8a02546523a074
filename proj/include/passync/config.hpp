#pragma once
#include <string>

#include "passync/engine.hpp"

namespace passync {

ScenarioConfig parse_config_json(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

// One row per decimated time: t, x_i..., e_i..., est_j...
void write_csv(const RunResult& res, const std::string& path);
// Same columns with a gnuplot-ready comment header.
void write_plotdata(const RunResult& res, const std::string& path);
void write_metrics(const RunResult& res, const ScenarioConfig& cfg, const std::string& path);

}  // namespace passync
