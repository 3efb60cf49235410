#include "cfq/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfq/matrix_io.hpp"

namespace cfq {

namespace {

std::string type_name(const nlohmann::json& j) { return j.type_name(); }

long line_of_byte(const std::string& text, std::size_t byte) {
    long line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

nlohmann::json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0) << ": "
            << e.what();
        throw ConfigError(msg.str());
    }
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

bool ConfigView::has(const std::string& key) const {
    return node_->is_object() && node_->contains(key);
}

void ConfigView::allow_keys(const std::vector<std::string>& allowed) const {
    if (!node_->is_object()) fail("expected an object, got " + type_name(*node_));
    for (const auto& item : node_->items()) {
        bool ok = false;
        for (const std::string& k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) {
            std::string known;
            for (const std::string& k : allowed) {
                if (!known.empty()) known += ", ";
                known += k;
            }
            throw ConfigError("unknown key '" + path_ + "/" + item.key() +
                              "' (known keys: " + known + ")");
        }
    }
}

ConfigView ConfigView::child(const std::string& key) const {
    if (!has(key)) fail("missing required field '" + key + "'");
    return ConfigView((*node_)[key], path_ + "/" + key);
}

std::optional<ConfigView> ConfigView::child_opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return ConfigView((*node_)[key], path_ + "/" + key);
}

double ConfigView::number(const std::string& key) const {
    const ConfigView c = child(key);
    if (!c.raw().is_number()) c.fail("expected a number, got " + type_name(c.raw()));
    return c.raw().get<double>();
}

double ConfigView::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long ConfigView::integer(const std::string& key) const {
    const ConfigView c = child(key);
    if (!c.raw().is_number_integer())
        c.fail("expected an integer, got " + type_name(c.raw()));
    return c.raw().get<long>();
}

long ConfigView::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::uint64_t ConfigView::uint64_or(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const ConfigView c = child(key);
    if (!c.raw().is_number_unsigned() && !c.raw().is_number_integer())
        c.fail("expected a non-negative integer, got " + type_name(c.raw()));
    if (c.raw().is_number_integer() && c.raw().get<long long>() < 0)
        c.fail("expected a non-negative integer");
    return c.raw().get<std::uint64_t>();
}

bool ConfigView::boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const ConfigView c = child(key);
    if (!c.raw().is_boolean()) c.fail("expected a boolean, got " + type_name(c.raw()));
    return c.raw().get<bool>();
}

std::string ConfigView::string(const std::string& key) const {
    const ConfigView c = child(key);
    if (!c.raw().is_string()) c.fail("expected a string, got " + type_name(c.raw()));
    return c.raw().get<std::string>();
}

std::string ConfigView::string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
}

std::vector<double> ConfigView::number_list(const std::string& key) const {
    const ConfigView c = child(key);
    if (!c.raw().is_array()) c.fail("expected an array, got " + type_name(c.raw()));
    std::vector<double> out;
    for (const auto& v : c.raw()) {
        if (!v.is_number()) c.fail("expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<long> ConfigView::integer_list(const std::string& key) const {
    const ConfigView c = child(key);
    if (!c.raw().is_array()) c.fail("expected an array, got " + type_name(c.raw()));
    std::vector<long> out;
    for (const auto& v : c.raw()) {
        if (!v.is_number_integer()) c.fail("expected an array of integers");
        out.push_back(v.get<long>());
    }
    return out;
}

void ConfigView::fail(const std::string& message) const {
    throw ConfigError("config error at '" + (path_.empty() ? "/" : path_) +
                      "': " + message);
}

PolySymbol parse_symbol(const ConfigView& view, int dof) {
    view.allow_keys({"preset", "modes", "terms", "max_degree"});
    if (view.has("preset")) {
        const std::string preset = view.string("preset");
        if (preset == "zero") return PolySymbol(dof);
        if (preset == "oscillator") return oscillator_symbol(dof);
        if (preset == "quartic") {
            if (dof != 1) view.fail("preset 'quartic' is single-mode");
            return oscillator_symbol(1) + PolySymbol::monomial(1, {0}, {4}, 0.25);
        }
        if (preset == "rotation") {
            const std::vector<long> modes = view.integer_list("modes");
            if (modes.size() != 2) view.fail("preset 'rotation' needs 'modes': [a, b]");
            if (modes[0] < 0 || modes[1] < 0 || modes[0] >= dof || modes[1] >= dof ||
                modes[0] == modes[1])
                view.fail("'modes' must be two distinct mode indices below dof");
            return rotation_symbol(dof, static_cast<int>(modes[0]),
                                   static_cast<int>(modes[1]));
        }
        view.fail("unknown preset '" + preset +
                  "' (known: zero, oscillator, quartic, rotation)");
    }
    if (!view.has("terms")) view.fail("symbol needs either 'preset' or 'terms'");
    const int max_degree = static_cast<int>(view.integer_or("max_degree", 8));
    PolySymbol sym(dof, max_degree);
    const ConfigView terms = view.child("terms");
    if (!terms.raw().is_array() || terms.raw().empty())
        terms.fail("expected a non-empty array of terms");
    long index = 0;
    for (const auto& t : terms.raw()) {
        const ConfigView term(t, terms.path() + "/" + std::to_string(index++));
        term.allow_keys({"p", "q", "c"});
        const std::vector<long> pe = term.integer_list("p");
        const std::vector<long> qe = term.integer_list("q");
        const double c = term.number("c");
        if (static_cast<int>(pe.size()) != dof || static_cast<int>(qe.size()) != dof)
            term.fail("'p' and 'q' exponent lists must have one entry per mode");
        std::vector<int> pi(pe.begin(), pe.end()), qi(qe.begin(), qe.end());
        for (long e : pe)
            if (e < 0) term.fail("exponents must be non-negative");
        for (long e : qe)
            if (e < 0) term.fail("exponents must be non-negative");
        sym = sym + PolySymbol::monomial(dof, pi, qi, c, max_degree);
    }
    return sym;
}

PhasePoint parse_point(const ConfigView& view, int dof) {
    view.allow_keys({"p", "q"});
    std::vector<double> p = view.number_list("p");
    std::vector<double> q = view.number_list("q");
    if (static_cast<int>(p.size()) != dof || static_cast<int>(q.size()) != dof)
        view.fail("'p' and 'q' must each list one value per mode");
    return PhasePoint(std::move(p), std::move(q));
}

FockSpace parse_space(const ConfigView& view) {
    view.allow_keys({"cutoff", "dof"});
    const long cutoff = view.integer("cutoff");
    const long dof = view.integer_or("dof", 1);
    if (cutoff < 2) view.fail("'cutoff' must be at least 2");
    if (dof < 1) view.fail("'dof' must be at least 1");
    return build_space(static_cast<int>(cutoff), static_cast<int>(dof));
}

std::uint64_t config_fingerprint(const nlohmann::json& config) {
    const std::string canon = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void write_manifest(const RunManifest& manifest, const nlohmann::json& effective_config,
                    const std::string& out_dir) {
    nlohmann::json j;
    j["experiment"] = manifest.experiment;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["seed_ladder"] = "sample i uses splitmix64(seed ^ i)";
    j["rng"] = "mt19937_64+splitmix64";
    j["workers"] = manifest.workers;
    j["versions"] = {{"cfq", "0.1.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
    j["artifacts"] = manifest.artifacts;
    j["warnings"] = manifest.warnings;
    j["config"] = effective_config;
    write_json_file(j, out_dir + "/manifest.json");
}

}  // namespace cfq
