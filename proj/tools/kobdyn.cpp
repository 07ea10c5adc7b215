#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kobdyn/dynamics.hpp"
#include "kobdyn/errors.hpp"
#include "kobdyn/harness.hpp"
#include "kobdyn/schema.hpp"

using namespace kobdyn;

int main(int argc, char** argv) {
  CLI::App app{"kobdyn - Kobayashi-geometry dynamics toolkit"};
  app.require_subcommand(1);

  // run <config.json> [--out DIR] [--seed N]
  std::string run_config;
  std::string run_out;
  std::optional<std::uint64_t> run_seed;
  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", run_config, "config JSON file")->required();
  run_cmd->add_option("--out", run_out, "output directory override");
  std::uint64_t seed_val = 0;
  auto* seed_opt = run_cmd->add_option("--seed", seed_val, "seed override");

  // suite <dir>
  std::string suite_dir;
  std::string suite_out;
  auto* suite_cmd = app.add_subcommand("suite", "run every config in a directory");
  suite_cmd->add_option("dir", suite_dir, "directory of config JSON files")->required();
  suite_cmd->add_option("--out", suite_out, "output directory override");

  // classify --map '<json>' [--domain '<json>'] [--seed N]
  std::string cl_map, cl_domain;
  std::uint64_t cl_seed = 1;
  auto* cl_cmd = app.add_subcommand("classify", "classify a self-map");
  cl_cmd->add_option("--map", cl_map, "map JSON")->required();
  cl_cmd->add_option("--domain", cl_domain, "domain JSON");
  cl_cmd->add_option("--seed", cl_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (*seed_opt) run_seed = seed_val;
      RunResult rr = run_file(run_config,
                              run_out.empty() ? std::nullopt
                                              : std::optional<std::filesystem::path>(run_out),
                              run_seed);
      for (const auto& c : rr.report.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
      std::cout << (rr.report.pass() ? "PASS" : "FAIL") << " (" << rr.files.back().string()
                << ")\n";
      return rr.exit_code;
    }
    if (*suite_cmd) {
      SuiteResult sr = run_suite(suite_dir,
                                 suite_out.empty()
                                     ? std::nullopt
                                     : std::optional<std::filesystem::path>(suite_out));
      for (const auto& row : sr.summary["suite"])
        std::cout << (row["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
                  << row["config"].get<std::string>() << "\n";
      std::cout << "summary: " << sr.summary_path.string() << "\n";
      return sr.exit_code;
    }
    if (*cl_cmd) {
      nlohmann::json mj = nlohmann::json::parse(cl_map);
      std::optional<Domain> hint;
      if (!cl_domain.empty()) hint = parse_domain(nlohmann::json::parse(cl_domain));
      HolMap f = parse_map(mj, hint);
      IterateConfig ic;
      ic.seed = cl_seed;
      Classification cls = classify(f, ic);
      std::cout << cls.to_json().dump(2) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what();
    if (!e.pointer.empty()) std::cerr << " (at " << e.pointer << ")";
    std::cerr << "\n";
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
  return kExitOk;
}
