#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypflow/flow.hpp"

namespace hypflow::cli {

using json = nlohmann::json;

struct GridSpec {
  GridMode mode = GridMode::axisym;
  int n = 2;
  int ntheta = 128;
  int nphi = 0;
  int fd_order = 0;  // 0 picks the mode default
};

// Generators: sphere, perturbed_sphere, blob, snapshot.
struct SurfaceSpec {
  std::string generator = "perturbed_sphere";
  double radius = 1.0;
  double eps = 0.05;
  int l = 2;
  std::vector<double> coefficients;
  std::string snapshot;
  std::optional<double> cap_theta;
  bool require_h_convex = false;
};

// Kinds: constant (value), power (p, scale), exponential (a, scale),
// table (r, values).
struct WeightSpec {
  std::string name;
  std::string kind = "constant";
  double value = 1.0;
  double p = 1.0;
  double a = 1.0;
  double scale = 1.0;
  std::vector<double> r;
  std::vector<double> values;
  EvaluationMode mode = EvaluationMode::frozen;
  Extension extension = Extension::radial;

  WeightProfile build() const;
};

struct FlowSpec {
  FlowConfig config;
  bool plots = true;
  double w1_tolerance = 1e-5;
  double monotone_slack = 1e-9;
  double radius_tolerance = 1e-4;
};

// Parameter lists crossed with each other; an empty list keeps the base value.
struct SweepSpec {
  std::string command = "verify";
  std::vector<int> n;
  std::vector<int> ntheta;
  std::vector<double> radius;
  std::vector<double> eps;
  std::vector<int> l;
  std::vector<int> k;
  int jobs = 1;
};

struct RunConfig {
  GridSpec grid;
  SurfaceSpec surface;
  std::vector<WeightSpec> weights;
  std::vector<int> ks{1};
  std::optional<FlowSpec> flow;
  std::string output_dir = "hypflow-out";
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 1;
  // The document this config was parsed from, echoed into every report.
  json source = json::object();

  // Throws ConfigError on unknown keys, wrong types or inconsistent values.
  static RunConfig from_json(const json& doc);
  static RunConfig load(const std::filesystem::path& path);
  // Fully resolved configuration, defaults included.
  json resolved() const;

  void validate() const;
  std::shared_ptr<const SphereGrid> make_grid() const;
  RadialSurface make_surface() const;
  std::vector<WeightProfile> profiles() const;
};

}  // namespace hypflow::cli
