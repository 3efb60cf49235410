// Serialization of operators and states (JSON, row-major interleaved re/im
// doubles) and deterministic text formatting for CSV artifacts.
#pragma once

#include <json.hpp>

#include "cfq/state_vector.hpp"

namespace cfq {

nlohmann::json operator_to_json(const FockOperator& A);
nlohmann::json state_to_json(const StateVector& s);
FockOperator operator_from_json(const nlohmann::json& j);
StateVector state_from_json(const nlohmann::json& j);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

// Shortest-exact decimal form of a double ("%.17g"); used for every CSV cell
// so artifacts are byte-stable across runs.
std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cfq
