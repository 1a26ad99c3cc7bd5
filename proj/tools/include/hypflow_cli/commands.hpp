#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "hypflow_cli/config.hpp"
#include "hypflow_cli/report.hpp"

namespace hypflow::cli {

// Each command returns the document and writes its side files into
// config.output_dir, which must exist.
ReportDocument cmd_verify(const RunConfig& config);
ReportDocument cmd_flow(const RunConfig& config);
ReportDocument cmd_sweep(const RunConfig& config);
ReportDocument cmd_selftest(const RunConfig& config);

// Suites asserted on a finished flow run.
std::vector<SuiteResult> flow_suites(const FlowResult& result, const FlowSpec& spec,
                                     const std::vector<WeightSpec>& weights,
                                     const std::vector<int>& ks);

// Worst relative increase between consecutive entries, 0 for a non-increasing
// sequence.
double worst_relative_increase(const std::vector<double>& values);

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

struct CommandOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

// Loads and validates the config, runs the command, writes report.json and
// maps errors onto the exit-status contract.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace hypflow::cli
