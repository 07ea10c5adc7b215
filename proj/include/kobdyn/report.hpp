#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kobdyn {

// One verified inequality or identity: observed value against its bound.
struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0;
  double bound = 0;
  double tolerance = 0;
  nlohmann::json witness;  // failing sample / index; null on pass

  static CheckResult make(std::string name, bool pass, double observed, double bound,
                          double tol, nlohmann::json witness = nullptr) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = pass;
    c.observed = observed;
    c.bound = bound;
    c.tolerance = tol;
    c.witness = pass ? nlohmann::json(nullptr) : std::move(witness);
    return c;
  }

  nlohmann::json to_json() const {
    return {{"name", name},       {"pass", pass},           {"observed", observed},
            {"bound", bound},     {"tolerance", tolerance}, {"witness", witness}};
  }
};

struct VerdictReport {
  std::string title;
  std::vector<CheckResult> checks;
  nlohmann::json extra;  // free-form companion data (estimates, fitted constants)

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(CheckResult c) { checks.push_back(std::move(c)); }

  void merge(const VerdictReport& other) {
    for (const auto& c : other.checks) checks.push_back(c);
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    nlohmann::json j{{"title", title}, {"pass", pass()}, {"checks", arr}};
    if (!extra.is_null()) j["extra"] = extra;
    return j;
  }
};

}  // namespace kobdyn
