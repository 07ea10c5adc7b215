#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kobdyn/domain.hpp"
#include "kobdyn/holomap.hpp"
#include "kobdyn/report.hpp"

namespace kobdyn {

// Exit codes of the CLI and of RunResult.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

struct ExperimentConfig {
  nlohmann::json raw;
  std::string task;  // classify | forward | backward | construct |
                     // verify-theorem01 | verify-lemmas | distance-bench
  std::uint64_t seed = 0;
  Domain domain;
  std::optional<HolMap> map;
  nlohmann::json params;  // task parameters (see docs/schema.md)
  std::string name;       // output file stem
  std::filesystem::path out_dir = "out";
};

// Parses and validates a config document; ConfigError carries a pointer to
// the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);

struct RunResult {
  VerdictReport report;
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
};

// Dispatches a config to the module operations and emits the report JSON,
// orbit CSV/JSON and plot polylines under cfg.out_dir.
RunResult run(const ExperimentConfig& cfg);

// Reads, overrides (--out / --seed) and runs a config file.  Numeric module
// errors are converted into a failing report with exit code 3 instead of
// propagating.
RunResult run_file(const std::filesystem::path& config_path,
                   const std::optional<std::filesystem::path>& out_override = std::nullopt,
                   std::optional<std::uint64_t> seed_override = std::nullopt);

struct SuiteResult {
  nlohmann::json summary;
  int exit_code = kExitOk;
  std::filesystem::path summary_path;
};

// Runs every *.json config in the directory (sorted order), aggregates a
// summary table, exit code reflects the worst run.
SuiteResult run_suite(const std::filesystem::path& dir,
                      const std::optional<std::filesystem::path>& out_override = std::nullopt);

// Verbosity from KOBDYN_LOG (silent unless set to info/debug).
void log_line(const std::string& msg);

}  // namespace kobdyn
