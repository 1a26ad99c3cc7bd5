#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypflow/error.hpp"
#include "hypflow/functionals.hpp"
#include "hypflow/rsurface.hpp"

namespace hypflow {

enum class Stepper { rk4, euler };

std::string to_string(Stepper stepper);
Stepper stepper_from_string(const std::string& name);

struct FlowConfig {
  double dt_safety = 0.25;
  double t_max = 100.0;
  double stop_speed_tol = 1e-6;
  int snapshot_stride = 50;
  bool guard_h_convex = true;
  double tol_guard = 1e-8;
  Stepper stepper = Stepper::rk4;
  int max_halvings = 5;
  long max_steps = 10'000'000;

  // Throws ConfigError on nonpositive tolerances, stride or t_max.
  void validate() const;
};

struct FlowState {
  double t = 0.0;
  RadialSurface surface;
  GeometryFields geometry;
  Field speed;  // F = cosh(r) / E_1 - u
};

// Raised when a step cannot satisfy the guards even after the allowed number
// of dt halvings. Carries the last accepted surface.
class FlowAbort : public BreakdownError {
 public:
  FlowAbort(const std::string& what, std::size_t node, RadialSurface snapshot, double t)
      : BreakdownError(what, node), snapshot_(std::move(snapshot)), t_(t) {}
  const RadialSurface& snapshot() const noexcept { return snapshot_; }
  double time() const noexcept { return t_; }

 private:
  RadialSurface snapshot_;
  double t_;
};

// F = cosh(r) / E_1 - u. Throws BreakdownError at the first node with E_1 <= 0.
Field speed(const GeometryFields& geo);

FlowState make_state(RadialSurface surface, double t = 0.0);

// dt_safety * h^2 / max(max_nodes cosh / (E_1^2 sinh^2), 1), h = grid spacing.
double stable_dt(const FlowState& state, const FlowConfig& config);

// One stepper update with the radial graph equation dr/dt = v F.
FlowState advance(const FlowState& state, double dt, Stepper stepper);

struct StepResult {
  FlowState state;
  double dt = 0.0;
  int halvings = 0;
};

// Step with guards (r > 0 and u > 0, E_1 > 0, optional h-convexity margin
// >= -tol_guard). dt < 0 picks stable_dt. Halves dt on guard failure and
// throws FlowAbort after max_halvings.
StepResult step(const FlowState& state, const FlowConfig& config, double dt = -1.0);

// Weight profile tracked along a run. Frozen profiles are evaluated on the
// initial radii, radial ones on the current radii.
struct TracedProfile {
  std::string name;
  WeightProfile profile;
};

class FlowTrace {
 public:
  FlowTrace() = default;
  FlowTrace(int n, std::vector<TracedProfile> profiles, std::vector<int> ks,
            Field initial_r);

  void record(const FlowState& state);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  // Column by name; throws ConfigError if unknown.
  std::vector<double> column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;

  void write_csv(std::ostream& out) const;

  static std::string frozen_column(const std::string& profile);
  static std::string radial_column(const std::string& profile);
  static std::string phi2_column(const std::string& profile, int k);

 private:
  int n_ = 2;
  std::vector<TracedProfile> profiles_;
  std::vector<int> ks_;
  Field initial_r_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

struct FlowResult {
  FlowTrace trace;
  FlowState final_state;
  long steps = 0;
  int halvings = 0;
  double w1_initial = 0.0;
  double w1_final = 0.0;
  double predicted_radius = 0.0;  // q1^{-1}(W_1 of the initial surface)
  double final_radius = 0.0;      // round-sphere mean of r
  double min_h_convex_margin = 0.0;  // over all accepted steps
  double decay_rate = 0.0;        // -slope of log osc(r), last half of trace
  bool converged = false;         // max|F| < stop_speed_tol reached

  double w1_drift() const { return std::abs(w1_final - w1_initial) / w1_initial; }
  double radius_error() const {
    return std::abs(final_radius - predicted_radius) / predicted_radius;
  }
};

// Integrates until max|F| < stop_speed_tol or t_max. The surface must be
// closed, starshaped, and h-convex when the h-convexity guard is on.
FlowResult run(const RadialSurface& surface, const FlowConfig& config,
               const std::vector<TracedProfile>& profiles = {}, const std::vector<int>& ks = {});

// Least-squares slope of log(values) against t over the last half of the
// samples with positive values; returns -slope.
double exponential_decay_rate(const std::vector<double>& t, const std::vector<double>& values);

// Central differences in time against the first-variation integrals.
struct EvolutionResiduals {
  double area_rate = 0.0;     // (A(t+d) - A(t-d)) / 2d
  double area_expected = 0.0; // int n E_1 F
  double w1_rate = 0.0;
  double w1_expected = 0.0;   // int F E_1
  double scale = 0.0;         // int n E_1 |F|
  double area_abs = 0.0;      // |area_rate - area_expected|
  double w1_abs = 0.0;        // |w1_rate - w1_expected|
  double area_residual = 0.0; // area_abs / scale
  double w1_residual = 0.0;   // w1_abs / (scale / n)
};

EvolutionResiduals evolution_identity_suite(const FlowState& state, double delta = 1e-3,
                                            Stepper stepper = Stepper::rk4);

}  // namespace hypflow
