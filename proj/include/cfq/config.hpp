// Strict JSON configuration handling for the experiment runner.
//
// Loading is line-anchored: malformed JSON reports the 1-based line of the
// offending byte.  Field access is schema-checked: every object must declare
// its full key set, unknown keys are rejected with their JSON-pointer path,
// and type mismatches name both the path and the expected type.  The helpers
// shared by all experiments (phase-space symbols, endpoints, spaces) and the
// run manifest live here too.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfq/fock_space.hpp"
#include "cfq/poly_symbol.hpp"

namespace cfq {

// Parses `text`, throwing ConfigError with "<origin>:<line>: <reason>" on
// malformed input.
nlohmann::json parse_config_text(const std::string& text, const std::string& origin);
nlohmann::json load_config_file(const std::string& path);

// A view of one JSON node carrying its pointer path for error messages.
class ConfigView {
  public:
    ConfigView(const nlohmann::json& node, std::string path)
        : node_(&node), path_(std::move(path)) {}

    const nlohmann::json& raw() const { return *node_; }
    const std::string& path() const { return path_; }

    bool has(const std::string& key) const;

    // The node must be an object whose keys all appear in `allowed`.
    void allow_keys(const std::vector<std::string>& allowed) const;

    ConfigView child(const std::string& key) const;                 // required
    std::optional<ConfigView> child_opt(const std::string& key) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::uint64_t uint64_or(const std::string& key, std::uint64_t fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::string string(const std::string& key) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> number_list(const std::string& key) const;
    std::vector<long> integer_list(const std::string& key) const;

    [[noreturn]] void fail(const std::string& message) const;

  private:
    const nlohmann::json* node_;
    std::string path_;
};

// Symbol descriptions accepted everywhere a PolySymbol is configured:
//   {"preset": "zero" | "oscillator" | "quartic"}
//   {"preset": "rotation", "modes": [a, b]}
//   {"terms": [{"p": [..], "q": [..], "c": <num>}, ...], "max_degree": <int>?}
// Exponent lists have one entry per degree of freedom.
PolySymbol parse_symbol(const ConfigView& view, int dof);

// {"p": [..], "q": [..]} with `dof` entries each.
PhasePoint parse_point(const ConfigView& view, int dof);

// {"cutoff": <int>, "dof": <int>}
FockSpace parse_space(const ConfigView& view);

// FNV-1a over the canonical (sorted-key) serialization; hex-encoded.
std::uint64_t config_fingerprint(const nlohmann::json& config);
std::string fingerprint_hex(std::uint64_t h);

struct RunManifest {
    std::string experiment;
    std::string config_hash;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::string> artifacts;  // file names relative to the run dir
    std::vector<std::string> warnings;
};

// Writes <out_dir>/manifest.json: experiment, config hash, seed and the seed
// ladder description, RNG identification, library versions, artifact list and
// the full effective configuration.  Deliberately timestamp-free so reruns
// are byte-identical.
void write_manifest(const RunManifest& manifest, const nlohmann::json& effective_config,
                    const std::string& out_dir);

}  // namespace cfq
