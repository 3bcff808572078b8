#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace oneshot {

enum ExitCode : int {
  exit_ok = 0,
  exit_violation = 1,
  exit_input_error = 2,
  exit_infeasible = 3,
};

/// Runs one subcommand (measure, smooth, distill-pure, distill-ensemble, eoa,
/// spectrum, verify). `args[0]` is the program name. The summary table goes
/// to `out`; diagnostics and usage to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a over the compact dump of `report` without its "timing" and
/// "determinism_hash" fields.
std::uint64_t determinism_hash(const nlohmann::json& report);

}  // namespace oneshot
