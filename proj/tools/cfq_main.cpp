// cfq: configuration-driven experiment runner.
//
//   cfq <experiment> --config <path> [--out <dir>] [--seed <u64>] [--workers <n>]
//
// The config file is a strict JSON document; command-line flags override the
// corresponding config fields.  The output directory resolves from --out,
// then $CFQ_OUT, then the config's "out_dir".  Exit codes: 0 success,
// 2 tolerance failure, 1 configuration or runtime error.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "cfq/config.hpp"
#include "cfq/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"coherent-state quantization and regularized path-integral laboratory"};
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 1;
    app.add_option("experiment", experiment,
                   "one of: quantize, resolution, propagate, nu-sweep, project, "
                   "gauge-check, classical-flow, stochastic-check")
        ->required();
    app.add_option("--config", config_path, "path to the JSON experiment config")
        ->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory for artifacts");
    auto* seed_opt = app.add_option("--seed", seed, "override the config's RNG seed");
    auto* workers_opt =
        app.add_option("--workers", workers, "override the config's worker count");
    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json config = cfq::load_config_file(config_path);
        if (!config.is_object())
            throw cfq::ConfigError("config error at '/': expected a top-level object");

        if (!config.contains("experiment"))
            config["experiment"] = experiment;
        else if (config["experiment"] != experiment)
            throw cfq::ConfigError("experiment mismatch: command line says '" + experiment +
                                   "', config says '" +
                                   config["experiment"].get<std::string>() + "'");
        if (seed_opt->count() > 0) config["seed"] = seed;
        if (workers_opt->count() > 0) config["workers"] = workers;

        // Resolve where to write, then drop the location from the effective
        // config so artifacts hash identically wherever they are placed.
        std::string out;
        if (out_opt->count() > 0) {
            out = out_dir;
        } else if (const char* env = std::getenv("CFQ_OUT"); env && *env) {
            out = env;
        } else if (config.contains("out_dir") && config["out_dir"].is_string()) {
            out = config["out_dir"].get<std::string>();
        } else {
            throw cfq::ConfigError(
                "no output directory: pass --out, set CFQ_OUT, or add 'out_dir'");
        }
        config.erase("out_dir");

        const cfq::RunResult result = cfq::run_experiment(config, out);
        for (const std::string& line : result.summary) std::cout << line << '\n';
        std::cout << (result.exit_code == 0 ? "OK" : "TOLERANCE FAILURE") << '\n';
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
