#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypflow/functionals.hpp"

namespace hypflow::cli {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "hypflow.report/1";

enum ExitCode : int {
  kExitPass = 0,
  kExitAssertion = 2,
  kExitUsage = 3,
  kExitBreakdown = 4,
};

// One asserted check: `measured` compared against `tolerance` with `relation`
// ("<=" or ">=").
struct SuiteResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool passed = false;
  std::string detail;

  static SuiteResult at_most(std::string name, double measured, double tolerance,
                             std::string detail = {});
  static SuiteResult at_least(std::string name, double measured, double tolerance,
                              std::string detail = {});
};

struct ReportDocument {
  std::string command;
  json config = json::object();    // echo of the input document
  json resolved = json::object();  // with defaults filled in
  std::uint64_t seed = 0;
  std::vector<InequalityReport> reports;
  std::vector<SuiteResult> suites;
  std::vector<std::string> files;  // outputs relative to the output directory
  std::string status;              // pass | fail | breakdown | usage
  std::string diagnostic;
  json extra = json::object();

  bool all_passed() const;
  // Sets status from the suites and reports unless already breakdown/usage.
  void finalize();
  int exit_code() const;
  json to_json() const;
  void write(const std::filesystem::path& path) const;
  // Plain-text table of suites and reports.
  std::string table() const;
};

json to_json(const InequalityReport& report);
json to_json(const SuiteResult& suite);

// %.17g, or "nan"/"inf" spelled out.
std::string format_number(double x);

}  // namespace hypflow::cli
