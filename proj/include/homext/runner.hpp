#pragma once

#include <cstdint>
#include <string>

#include "homext/errors.hpp"

#include "json.hpp"

namespace homext {

/// Full configuration for one CLI run.  Ranges are validated at parse time.
struct RunConfig {
  std::string command;  // extend | energy | snowflake | verify | bound
  nlohmann::json boundary_map = {{"type", "identity"}};
  double p = 1.0;
  double beta = 0.0;
  int depth = 8;
  double snow_p = 1.0 / 3.0;
  nlohmann::json snow_oracle = {{"kind", "all1"}};
  int snow_generation = 5;
  std::string choice2_letters = "BCCB";
  std::string bump_side = "outward";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool json_logs = false;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
};

/// Executes the configured command, writing all artifacts plus a manifest
/// into the output directory.  Returns the process exit code: 0 on success,
/// 3 when a verify/property suite reports failures.  Validation problems
/// throw homext::error (exit code 2 at the CLI).
int run(const RunConfig& config);

/// The property-suite battery behind the `verify` command.
nlohmann::json verify_all(std::uint64_t seed);

}  // namespace homext
