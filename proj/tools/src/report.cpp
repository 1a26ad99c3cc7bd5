#include "hypflow_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypflow/error.hpp"

namespace hypflow::cli {

SuiteResult SuiteResult::at_most(std::string name, double measured, double tolerance,
                                 std::string detail) {
  return SuiteResult{std::move(name), measured, tolerance, "<=",
                     measured <= tolerance, std::move(detail)};
}

SuiteResult SuiteResult::at_least(std::string name, double measured, double tolerance,
                                  std::string detail) {
  return SuiteResult{std::move(name), measured, tolerance, ">=",
                     measured >= tolerance, std::move(detail)};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

json to_json(const InequalityReport& r) {
  return {{"kind", to_string(r.kind)},
          {"k", r.k},
          {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"gap", number(r.gap)},
          {"relative_gap", number(r.relative_gap())},
          {"boundary_term", number(r.boundary_term)},
          {"tolerance", number(r.tolerance)},
          {"equality_expected", r.equality_expected},
          {"outside_hypothesis", r.outside_hypothesis},
          {"h_convex_margin", number(r.h_convex_margin)},
          {"passed", r.passed()},
          {"surface", r.surface_id},
          {"profile", r.profile},
          {"extension", r.extension},
          {"grid", {{"mode", r.mode}, {"n", r.n}, {"ntheta", r.ntheta}, {"nphi", r.nphi},
                    {"fd_order", r.fd_order}}}};
}

json to_json(const SuiteResult& s) {
  return {{"name", s.name},
          {"measured", number(s.measured)},
          {"relation", s.relation},
          {"tolerance", number(s.tolerance)},
          {"passed", s.passed},
          {"detail", s.detail}};
}

bool ReportDocument::all_passed() const {
  for (const auto& s : suites) {
    if (!s.passed) return false;
  }
  for (const auto& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

void ReportDocument::finalize() {
  if (status == "breakdown" || status == "usage") return;
  status = all_passed() ? "pass" : "fail";
}

int ReportDocument::exit_code() const {
  if (status == "usage") return kExitUsage;
  if (status == "breakdown") return kExitBreakdown;
  return status == "pass" ? kExitPass : kExitAssertion;
}

json ReportDocument::to_json() const {
  json j;
  j["schema"] = kReportSchema;
  j["version"] = "0.1.0";
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["resolved_config"] = resolved;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(cli::to_json(r));
  j["suites"] = json::array();
  for (const auto& s : suites) j["suites"].push_back(cli::to_json(s));
  j["files"] = files;
  int failed = 0;
  for (const auto& s : suites) failed += s.passed ? 0 : 1;
  for (const auto& r : reports) failed += r.passed() ? 0 : 1;
  j["summary"] = {{"status", status},
                  {"checks", static_cast<int>(suites.size() + reports.size())},
                  {"failed", failed}};
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

void ReportDocument::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report " + path.string());
  out << to_json().dump(2) << '\n';
}

std::string ReportDocument::table() const {
  std::ostringstream out;
  char line[256];
  if (!reports.empty()) {
    std::snprintf(line, sizeof line, "%-16s %2s %-22s %14s %14s %11s %s\n", "inequality", "k",
                  "profile", "lhs", "rhs", "rel.gap", "result");
    out << line;
    for (const auto& r : reports) {
      const char* verdict = r.outside_hypothesis ? "outside" : (r.passed() ? "pass" : "FAIL");
      std::snprintf(line, sizeof line, "%-16s %2d %-22s %14.8g %14.8g %11.3e %s\n",
                    to_string(r.kind).c_str(), r.k, r.profile.substr(0, 22).c_str(), r.lhs, r.rhs,
                    r.relative_gap(), verdict);
      out << line;
    }
  }
  if (!suites.empty()) {
    std::snprintf(line, sizeof line, "%-40s %13s %2s %11s %s\n", "suite", "measured", "", "tolerance",
                  "result");
    out << line;
    for (const auto& s : suites) {
      std::snprintf(line, sizeof line, "%-40s %13.6e %2s %11.3e %s\n", s.name.substr(0, 40).c_str(),
                    s.measured, s.relation.c_str(), s.tolerance, s.passed ? "pass" : "FAIL");
      out << line;
    }
  }
  out << "status: " << status << '\n';
  if (!diagnostic.empty()) out << "diagnostic: " << diagnostic << '\n';
  return out.str();
}

}  // namespace hypflow::cli
