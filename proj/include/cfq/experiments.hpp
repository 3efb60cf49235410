// The experiment runner behind the CLI: each named experiment reads a strict
// JSON configuration, drives the library, writes plot-ready CSV/JSON
// artifacts plus manifest.json into the output directory, and reports
// tolerance checks as PASS/FAIL summary lines.
#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace cfq {

struct RunResult {
    int exit_code = 0;                 // 0 success, 2 tolerance failure
    std::vector<std::string> summary;  // one line per reported check/value
};

// Executes config["experiment"] (one of: quantize, resolution, propagate,
// nu-sweep, project, gauge-check, classical-flow, stochastic-check).
// Throws ConfigError on schema violations and library errors on invalid
// inputs; the caller maps exceptions to exit code 1.
RunResult run_experiment(const nlohmann::json& config, const std::string& out_dir);

}  // namespace cfq
