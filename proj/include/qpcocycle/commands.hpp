#pragma once
//
// Campaign runner behind the command-line tool.  Each command takes a parsed
// config, produces result tables plus one human-readable summary line per
// cell, writes the report files, and reduces cell outcomes to an exit code:
//     0  every check passed (or the command has nothing to check)
//     1  at least one check failed
//     2  no failures, but at least one inconclusive result
//     3  usage error (unknown command, config violations, contract breaches)
// Library-level ContractError / DegenerateInputError propagate out of
// run_command and are mapped to 3 by the caller; NumericError / PrecisionError
// map to 2 (the computation ran but could not certify its result).

#include <string>
#include <vector>

#include "qpcocycle/config.hpp"
#include "qpcocycle/report.hpp"

namespace qpc {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "le",     "profile", "accel",  "zeros",
      "jensen", "verify-asymptotics", "verify-stratified",
      "verify-constants", "bounds"};
  return names;
}

struct CommandResult {
  int exit_code = 0;
  std::vector<report::Table> tables;
  std::vector<std::string> summary;  // one line per cell, in emission order
};

// Runs the command and returns its tables without touching the filesystem.
CommandResult run_command(const std::string& name, const CampaignConfig& cfg);

// run_command + write_reports into cfg.out_dir with cfg.format/cfg.precision.
CommandResult run_and_emit(const std::string& name, const CampaignConfig& cfg);

}  // namespace qpc
