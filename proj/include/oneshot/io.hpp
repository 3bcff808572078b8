#pragma once

// JSON state and ensemble files. Complex numbers are [re, im] pairs, matrices
// are row-major lists of rows.
//
//   {"kind": "pure",  "dims": [2, 2], "label": "bell", "amplitudes": [[re, im], ...]}
//   {"kind": "mixed", "dims": [2, 2], "subnormalized": false, "matrix": [[[re, im], ...], ...]}
//   {"dims": [2, 2], "members": [{"weight": 0.5, "amplitudes": [[re, im], ...]}, ...]}

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "oneshot/distillation.hpp"
#include "oneshot/linalg.hpp"

namespace oneshot {

using ParsedState = std::variant<DensityMatrix, PureState>;

struct StateFile {
  ParsedState state;
  std::optional<std::string> label;
};

/// `source` names the document in diagnostics.
StateFile parse_state_json(const nlohmann::json& doc, const std::string& source = "state");
StateFile parse_state_file(const std::filesystem::path& path);

PureEnsemble parse_ensemble_json(const nlohmann::json& doc, const std::string& source = "ensemble");
PureEnsemble parse_ensemble_file(const std::filesystem::path& path);

nlohmann::json to_json(const PureState& state, const std::optional<std::string>& label = std::nullopt);
nlohmann::json to_json(const DensityMatrix& rho, const std::optional<std::string>& label = std::nullopt);
nlohmann::json to_json(const PureEnsemble& ensemble);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

/// Density operator of either state kind.
DensityMatrix as_density(const ParsedState& state);

}  // namespace oneshot
