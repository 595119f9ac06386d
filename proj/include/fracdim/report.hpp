#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace fracdim {

struct Assertion {
  std::string claim;     ///< statement being checked, e.g. "R(p1,p3) <= 4 R(faces)"
  std::string relation;  ///< "<=", ">=", "<", ">", "in", "true"
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  ///< positive when satisfied
  bool passed = false;
  bool hard = true;  ///< soft assertions are reported but do not fail the experiment
};

struct ExperimentReport {
  std::string id;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json measurements = nlohmann::ordered_json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  Assertion& expect_le(std::string claim, double lhs, double rhs, bool hard = true);
  Assertion& expect_ge(std::string claim, double lhs, double rhs, bool hard = true);
  Assertion& expect_lt(std::string claim, double lhs, double rhs, bool hard = true);
  Assertion& expect_gt(std::string claim, double lhs, double rhs, bool hard = true);
  /// lo <= value <= hi; margin is the distance to the nearer endpoint.
  Assertion& expect_in(std::string claim, double value, double lo, double hi, bool hard = true);
  Assertion& expect_true(std::string claim, bool value, bool hard = true);

  /// All hard assertions pass (vacuously true without assertions).
  bool passed() const;
  std::size_t failures() const;
};

/// JSON form; `with_runtime` = false drops the only nondeterministic field.
nlohmann::ordered_json to_json(const ExperimentReport& report, bool with_runtime = true);
std::string to_markdown(const ExperimentReport& report);

}  // namespace fracdim
