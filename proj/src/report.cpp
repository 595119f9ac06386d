#include "fracdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracdim {

namespace {

Assertion& add(ExperimentReport& r, std::string claim, std::string relation, double measured, double bound,
               double margin, bool passed, bool hard) {
  // NaN measurements never pass.
  if (std::isnan(measured) || std::isnan(bound)) passed = false;
  r.assertions.push_back({std::move(claim), std::move(relation), measured, bound, margin, passed, hard});
  return r.assertions.back();
}

}  // namespace

Assertion& ExperimentReport::expect_le(std::string claim, double lhs, double rhs, bool hard) {
  return add(*this, std::move(claim), "<=", lhs, rhs, rhs - lhs, lhs <= rhs, hard);
}

Assertion& ExperimentReport::expect_ge(std::string claim, double lhs, double rhs, bool hard) {
  return add(*this, std::move(claim), ">=", lhs, rhs, lhs - rhs, lhs >= rhs, hard);
}

Assertion& ExperimentReport::expect_lt(std::string claim, double lhs, double rhs, bool hard) {
  return add(*this, std::move(claim), "<", lhs, rhs, rhs - lhs, lhs < rhs, hard);
}

Assertion& ExperimentReport::expect_gt(std::string claim, double lhs, double rhs, bool hard) {
  return add(*this, std::move(claim), ">", lhs, rhs, lhs - rhs, lhs > rhs, hard);
}

Assertion& ExperimentReport::expect_in(std::string claim, double value, double lo, double hi, bool hard) {
  auto& a = add(*this, std::move(claim), "in", value, hi, std::min(value - lo, hi - value), lo <= value && value <= hi,
                hard);
  a.relation = "in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  return a;
}

Assertion& ExperimentReport::expect_true(std::string claim, bool value, bool hard) {
  return add(*this, std::move(claim), "true", value ? 1.0 : 0.0, 1.0, value ? 0.0 : -1.0, value, hard);
}

bool ExperimentReport::passed() const { return failures() == 0; }

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.hard && !a.passed; }));
}

nlohmann::ordered_json to_json(const ExperimentReport& report, bool with_runtime) {
  nlohmann::ordered_json j;
  j["experiment"] = report.id;
  j["passed"] = report.passed();
  j["parameters"] = report.parameters;
  j["measurements"] = report.measurements;
  auto& list = j["assertions"] = nlohmann::ordered_json::array();
  for (const auto& a : report.assertions)
    list.push_back({{"claim", a.claim},
                    {"relation", a.relation},
                    {"measured", a.measured},
                    {"bound", a.bound},
                    {"margin", a.margin},
                    {"passed", a.passed},
                    {"hard", a.hard}});
  j["notes"] = report.notes;
  if (with_runtime) j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

std::string to_markdown(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "# " << report.id << ": " << (report.passed() ? "PASS" : "FAIL") << "\n\n";
  out << "Parameters: `" << report.parameters.dump() << "`\n\n";
  out << "| claim | relation | measured | bound | margin | result |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& a : report.assertions)
    out << "| " << a.claim << " | " << a.relation << " | " << a.measured << " | " << a.bound << " | " << a.margin
        << " | " << (a.passed ? "pass" : (a.hard ? "FAIL" : "fail (soft)")) << " |\n";
  if (!report.notes.empty()) {
    out << "\n";
    for (const auto& n : report.notes) out << "- " << n << "\n";
  }
  out << "\nMeasurements:\n\n```json\n" << report.measurements.dump(2) << "\n```\n";
  out << "\nRuntime: " << report.runtime_seconds << " s\n";
  return out.str();
}

}  // namespace fracdim
