#include "hypflow_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "hypflow_cli/svg.hpp"

namespace hypflow::cli {
namespace fs = std::filesystem;

namespace {

void check_orders(const std::vector<int>& ks, int n) {
  for (int k : ks) {
    if (k < 1 || k > n - 1) {
      throw ConfigError("k = " + std::to_string(k) + " is outside 1 <= k <= n - 1 for n = " +
                        std::to_string(n));
    }
  }
}

ReportDocument start(const std::string& command, const RunConfig& config) {
  ReportDocument doc;
  doc.command = command;
  doc.config = config.source;
  doc.resolved = config.resolved();
  doc.seed = config.seed;
  return doc;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::vector<InequalityReport> verify_reports(const RunConfig& config, const RadialSurface& surface) {
  const GeometryFields geo = geometry(surface);
  std::vector<InequalityReport> out;
  const auto profiles = config.profiles();
  for (const auto& profile : profiles) {
    for (int k : config.ks) out.push_back(ms_report_k(surface, geo, profile, k));
  }
  if (surface.closed()) {
    out.push_back(minkowski_type_report(surface, geo));
    for (int k : config.ks) {
      if (k >= 3 && k % 2 == 1) out.push_back(weighted_af_report(surface, geo, k));
    }
  }
  return out;
}

}  // namespace

double worst_relative_increase(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double scale = std::max(std::abs(values[i - 1]), std::numeric_limits<double>::min());
    worst = std::max(worst, (values[i] - values[i - 1]) / scale);
  }
  return worst;
}

ReportDocument cmd_verify(const RunConfig& config) {
  ReportDocument doc = start("verify", config);
  const RadialSurface surface = config.make_surface();
  check_orders(config.ks, surface.dim());
  doc.reports = verify_reports(config, surface);
  const ValidityReport valid = validity(surface);
  doc.extra["surface"] = {{"id", surface.id},
                          {"closed", surface.closed()},
                          {"h_convex_margin", valid.h_convex_margin}};
  std::ostringstream rows;
  rows << "kind,k,profile,extension,lhs,rhs,gap,relative_gap,boundary_term,tolerance,passed\n";
  for (const auto& r : doc.reports) {
    rows << to_string(r.kind) << ',' << r.k << ',' << r.profile << ',' << r.extension << ','
         << format_number(r.lhs) << ',' << format_number(r.rhs) << ',' << format_number(r.gap)
         << ',' << format_number(r.relative_gap()) << ',' << format_number(r.boundary_term) << ','
         << format_number(r.tolerance) << ',' << (r.passed() ? "true" : "false") << '\n';
  }
  write_text(fs::path(config.output_dir) / "reports.csv", rows.str());
  doc.files.push_back("reports.csv");
  doc.finalize();
  return doc;
}

std::vector<SuiteResult> flow_suites(const FlowResult& result, const FlowSpec& spec,
                                     const std::vector<WeightSpec>& weights,
                                     const std::vector<int>& ks) {
  std::vector<SuiteResult> out;
  const FlowTrace& trace = result.trace;
  out.push_back(SuiteResult::at_most("w1_conservation", result.w1_drift(), spec.w1_tolerance,
                                     "relative W1 drift over the run"));
  for (const auto& w : weights) {
    const std::string col = FlowTrace::frozen_column(w.name);
    out.push_back(SuiteResult::at_most("monotone_" + col, worst_relative_increase(trace.column(col)),
                                       spec.monotone_slack,
                                       "worst relative increase between snapshots"));
    if (w.kind != "constant") continue;
    for (int k : ks) {
      const std::string pc = FlowTrace::phi2_column(w.name, k);
      out.push_back(SuiteResult::at_most("monotone_" + pc, worst_relative_increase(trace.column(pc)),
                                         spec.monotone_slack,
                                         "worst relative increase between snapshots"));
    }
  }
  if (spec.config.guard_h_convex) {
    out.push_back(SuiteResult::at_least("h_convexity_preserved", result.min_h_convex_margin,
                                        -spec.config.tol_guard,
                                        "min kappa - 1 over accepted steps"));
  }
  const std::vector<double> speed = trace.column("max_abs_F");
  out.push_back(SuiteResult::at_most("stationary_limit", speed.back(), spec.config.stop_speed_tol,
                                     "max |F| at the last step"));
  out.back().passed = result.converged;
  out.push_back(SuiteResult::at_most("limit_radius", result.radius_error(), spec.radius_tolerance,
                                     "|mean r - q1^{-1}(W1_0)| / q1^{-1}(W1_0)"));
  const std::vector<double> osc = trace.column("osc_r");
  if (trace.size() >= 4 && osc.front() > 0.0) {
    out.push_back(SuiteResult::at_least("osc_decay_rate", result.decay_rate, 0.0,
                                        "exponential fit of osc(r) over the last half"));
    out.back().passed = result.decay_rate > 0.0;
  }
  return out;
}

namespace {

void write_plots(const fs::path& dir, const FlowTrace& trace, const std::vector<WeightSpec>& weights,
                 std::vector<std::string>& files) {
  const std::vector<double> t = trace.column("t");
  auto emit = [&](const std::string& name, LinePlot plot) {
    plot.x = t;
    plot.x_label = "t";
    write_svg(dir / name, plot);
    files.push_back(name);
  };
  emit("plot_area_w1.svg", {"area and W1", "", {}, {{"area", trace.column("area")},
                                                    {"W1", trace.column("W1")}}, false});
  LinePlot functionals{"weighted functionals (frozen)", "", {}, {}, false};
  for (const auto& w : weights) {
    functionals.series.push_back({w.name, trace.column(FlowTrace::frozen_column(w.name))});
  }
  emit("plot_functionals.svg", functionals);
  emit("plot_convergence.svg", {"convergence", "", {}, {{"osc_r", trace.column("osc_r")},
                                                       {"max_abs_F", trace.column("max_abs_F")}},
                                true});
  emit("plot_curvature.svg", {"principal curvature range", "", {}, {{"min_kappa", trace.column("min_kappa")},
                                                                   {"max_kappa", trace.column("max_kappa")}},
                              false});
}

std::vector<TracedProfile> traced(const RunConfig& config) {
  std::vector<TracedProfile> out;
  for (const auto& w : config.weights) out.push_back({w.name, w.build()});
  return out;
}

}  // namespace

ReportDocument cmd_flow(const RunConfig& config) {
  ReportDocument doc = start("flow", config);
  const FlowSpec spec = config.flow.value_or(FlowSpec{});
  const RadialSurface surface = config.make_surface();
  check_orders(config.ks, surface.dim());
  const fs::path dir(config.output_dir);
  FlowResult result;
  try {
    result = run(surface, spec.config, traced(config), config.ks);
  } catch (const FlowAbort& abort) {
    std::ofstream snap(dir / "abort_snapshot.csv");
    write_snapshot(snap, abort.snapshot());
    doc.files.push_back("abort_snapshot.csv");
    doc.status = "breakdown";
    doc.diagnostic = abort.what();
    doc.extra["abort"] = {{"t", abort.time()}, {"node", abort.node()}};
    return doc;
  }

  std::ofstream trace_out(dir / "trace.csv");
  result.trace.write_csv(trace_out);
  doc.files.push_back("trace.csv");
  std::ofstream final_out(dir / "final_surface.csv");
  write_snapshot(final_out, result.final_state.surface);
  doc.files.push_back("final_surface.csv");
  if (spec.plots) write_plots(dir, result.trace, config.weights, doc.files);

  doc.suites = flow_suites(result, spec, config.weights, config.ks);
  doc.extra["run"] = {{"steps", result.steps},
                      {"halvings", result.halvings},
                      {"t_final", result.final_state.t},
                      {"converged", result.converged},
                      {"w1_initial", result.w1_initial},
                      {"w1_final", result.w1_final},
                      {"predicted_radius", result.predicted_radius},
                      {"final_radius", result.final_radius},
                      {"min_h_convex_margin", result.min_h_convex_margin},
                      {"decay_rate", result.decay_rate}};
  doc.finalize();
  return doc;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

struct Cell {
  RunConfig config;
  json params;
};

struct CellOutcome {
  std::string status = "ok";
  std::vector<InequalityReport> reports;
  json run = json::object();
};

template <class T>
std::vector<T> or_base(const std::vector<T>& list, T base) {
  return list.empty() ? std::vector<T>{base} : list;
}

std::vector<Cell> expand(const RunConfig& base) {
  const SweepSpec& sw = *base.sweep;
  std::vector<Cell> cells;
  const std::vector<int> ks = sw.k.empty() ? std::vector<int>{0} : sw.k;
  for (int n : or_base(sw.n, base.grid.n)) {
    for (int nt : or_base(sw.ntheta, base.grid.ntheta)) {
      for (double radius : or_base(sw.radius, base.surface.radius)) {
        for (int l : or_base(sw.l, base.surface.l)) {
          for (double eps : or_base(sw.eps, base.surface.eps)) {
            for (int k : ks) {
              Cell c{base, json::object()};
              c.config.sweep.reset();
              c.config.grid.n = n;
              c.config.grid.ntheta = nt;
              c.config.surface.radius = radius;
              c.config.surface.l = l;
              c.config.surface.eps = eps;
              if (k > 0) c.config.ks = {k};
              c.params = {{"n", n}, {"ntheta", nt}, {"radius", radius}, {"l", l}, {"eps", eps},
                          {"k", k > 0 ? json(k) : json(base.ks)}};
              cells.push_back(std::move(c));
            }
          }
        }
      }
    }
  }
  return cells;
}

CellOutcome run_cell(const Cell& cell, const std::string& command) {
  CellOutcome out;
  const RunConfig& c = cell.config;
  for (int k : c.ks) {
    if (k < 1 || k > c.grid.n - 1) {
      out.status = "skipped: k outside 1 <= k <= n - 1";
      return out;
    }
  }
  try {
    const RadialSurface surface = c.make_surface();
    if (command == "verify") {
      out.reports = verify_reports(c, surface);
    } else {
      const FlowResult r = run(surface, c.flow.value_or(FlowSpec{}).config, traced(c), c.ks);
      out.run = {{"w1_drift", r.w1_drift()}, {"radius_error", r.radius_error()},
                 {"converged", r.converged}, {"steps", r.steps},
                 {"min_h_convex_margin", r.min_h_convex_margin}};
    }
  } catch (const Error& e) {
    out.status = std::string("aborted: ") + e.what();
  }
  return out;
}

}  // namespace

ReportDocument cmd_sweep(const RunConfig& config) {
  ReportDocument doc = start("sweep", config);
  if (!config.sweep) throw ConfigError("sweep: the config has no sweep section");
  const std::string command = config.sweep->command;
  const std::vector<Cell> cells = expand(config);
  std::vector<CellOutcome> outcomes(cells.size());
  const std::size_t jobs = static_cast<std::size_t>(config.sweep->jobs);
  for (std::size_t begin = 0; begin < cells.size(); begin += jobs) {
    const std::size_t end = std::min(cells.size(), begin + jobs);
    std::vector<std::future<CellOutcome>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_cell,
                                 std::cref(cells[i]), command));
    }
    for (std::size_t i = begin; i < end; ++i) outcomes[i] = batch[i - begin].get();
  }

  std::ostringstream csv;
  int aborted = 0, failed = 0, checked = 0;
  if (command == "verify") {
    csv << "cell,n,ntheta,radius,l,eps,kind,k,profile,extension,lhs,rhs,gap,relative_gap,tolerance,"
           "outside_hypothesis,passed,status\n";
  } else {
    csv << "cell,n,ntheta,radius,l,eps,w1_drift,radius_error,converged,status\n";
  }
  // (kind, k, profile, n, ntheta, radius, l) -> (eps, gap) for the eps-monotonicity check
  std::map<std::string, std::vector<std::pair<double, double>>> by_eps;
  json cell_list = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const json& p = cells[i].params;
    const CellOutcome& o = outcomes[i];
    if (o.status.rfind("aborted", 0) == 0) ++aborted;
    json entry = {{"cell", i}, {"params", p}, {"status", o.status}};
    std::ostringstream prefix;
    prefix << i << ',' << p["n"].get<int>() << ',' << p["ntheta"].get<int>() << ','
           << format_number(p["radius"].get<double>()) << ',' << p["l"].get<int>() << ','
           << format_number(p["eps"].get<double>());
    if (command == "flow") {
      if (!o.run.empty()) entry["run"] = o.run;
      const bool done = !o.run.empty();
      csv << prefix.str() << ',' << (done ? format_number(o.run["w1_drift"].get<double>()) : "")
          << ',' << (done ? format_number(o.run["radius_error"].get<double>()) : "") << ','
          << (done ? (o.run["converged"].get<bool>() ? "true" : "false") : "") << ',' << o.status
          << '\n';
      cell_list.push_back(entry);
      continue;
    }
    for (const auto& r : o.reports) {
      ++checked;
      if (!r.passed()) ++failed;
      csv << prefix.str() << ',' << to_string(r.kind) << ',' << r.k << ',' << r.profile << ','
          << r.extension << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
          << format_number(r.gap) << ',' << format_number(r.relative_gap()) << ','
          << format_number(r.tolerance) << ',' << (r.outside_hypothesis ? "true" : "false") << ','
          << (r.passed() ? "true" : "false") << ',' << o.status << '\n';
      if (!r.outside_hypothesis) {
        std::ostringstream key;
        key << to_string(r.kind) << '|' << r.k << '|' << r.profile << '|' << r.extension << '|'
            << p["n"] << '|' << p["ntheta"] << '|' << p["radius"] << '|' << p["l"];
        by_eps[key.str()].emplace_back(p["eps"].get<double>(), r.gap);
      }
      doc.reports.push_back(r);
    }
    if (o.reports.empty()) csv << prefix.str() << ",,,,,,,,,,,," << o.status << '\n';
    cell_list.push_back(entry);
  }
  write_text(fs::path(config.output_dir) / "sweep.csv", csv.str());
  doc.files.push_back("sweep.csv");
  doc.extra["cells"] = cell_list;

  doc.suites.push_back(SuiteResult::at_most("aborted_cells", aborted, 0.0));
  if (command == "verify") {
    doc.suites.push_back(SuiteResult::at_most("negative_gaps", failed, 0.0,
                                              std::to_string(checked) + " reports checked"));
    // Gap should shrink as eps -> 0 within each family.
    int violations = 0, families = 0;
    for (auto& [key, series] : by_eps) {
      if (series.size() < 2) continue;
      ++families;
      std::sort(series.begin(), series.end());
      for (std::size_t i = 1; i < series.size(); ++i) {
        if (std::abs(series[i].first) > std::abs(series[i - 1].first) &&
            series[i].second < series[i - 1].second) {
          ++violations;
        }
      }
    }
    if (families > 0) {
      doc.suites.push_back(SuiteResult::at_most("gap_monotone_in_eps", violations, 0.0,
                                                std::to_string(families) + " eps families"));
    }
  }
  doc.finalize();
  return doc;
}

// ---------------------------------------------------------------------------

int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  RunConfig config;
  std::optional<fs::path> out_dir;
  auto emit = [&](ReportDocument& doc) {
    if (out_dir) {
      doc.files.insert(doc.files.begin(), "report.json");
      doc.write(*out_dir / "report.json");
    }
    if (!options.quiet) out << doc.table();
    return doc.exit_code();
  };
  try {
    if (options.config_path) {
      config = RunConfig::load(*options.config_path);
    } else if (command != "selftest") {
      throw ConfigError(command + " needs --config");
    }
    if (options.out_dir) config.output_dir = *options.out_dir;
    if (options.seed) config.seed = *options.seed;
    if (command == "flow" && !config.flow) config.flow = FlowSpec{};
    config.validate();
    fs::create_directories(config.output_dir);
    out_dir = fs::path(config.output_dir);

    ReportDocument doc;
    if (command == "verify") {
      doc = cmd_verify(config);
    } else if (command == "flow") {
      doc = cmd_flow(config);
    } else if (command == "sweep") {
      doc = cmd_sweep(config);
    } else if (command == "selftest") {
      doc = cmd_selftest(config);
    } else {
      throw ConfigError("unknown command " + command);
    }
    if (doc.status == "breakdown") err << "error: " << doc.diagnostic << '\n';
    return emit(doc);
  } catch (const NodeError& e) {
    err << "error: " << e.what() << '\n';
    ReportDocument doc = start(command, config);
    doc.status = "breakdown";
    doc.diagnostic = e.what();
    doc.extra["node"] = e.node();
    return emit(doc);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    ReportDocument doc = start(command, config);
    doc.status = "breakdown";
    doc.diagnostic = e.what();
    return emit(doc);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace hypflow::cli
