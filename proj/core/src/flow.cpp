#include "hypflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace hypflow {

std::string to_string(Stepper stepper) { return stepper == Stepper::rk4 ? "rk4" : "euler"; }

Stepper stepper_from_string(const std::string& name) {
  if (name == "rk4") return Stepper::rk4;
  if (name == "euler") return Stepper::euler;
  throw ConfigError("unknown stepper '" + name + "' (expected rk4 or euler)");
}

void FlowConfig::validate() const {
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ConfigError("flow.dt_safety must lie in (0, 1]");
  if (!(t_max > 0.0)) throw ConfigError("flow.t_max must be positive");
  if (!(stop_speed_tol > 0.0)) throw ConfigError("flow.stop_speed_tol must be positive");
  if (snapshot_stride < 1) throw ConfigError("flow.snapshot_stride must be >= 1");
  if (!(tol_guard >= 0.0)) throw ConfigError("flow.tol_guard must be nonnegative");
  if (max_halvings < 0) throw ConfigError("flow.max_halvings must be nonnegative");
  if (max_steps < 1) throw ConfigError("flow.max_steps must be positive");
}

Field speed(const GeometryFields& geo) {
  Field f(geo.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e1 = geo.e[1][i];
    if (!(e1 > 0.0)) throw BreakdownError("speed: E_1 <= 0", i);
    f[i] = geo.lambda_prime[i] / e1 - geo.u[i];
  }
  return f;
}

FlowState make_state(RadialSurface surface, double t) {
  surface.validate();
  FlowState s;
  s.t = t;
  s.geometry = geometry(surface);
  s.speed = speed(s.geometry);
  s.surface = std::move(surface);
  return s;
}

double stable_dt(const FlowState& state, const FlowConfig& config) {
  const GeometryFields& geo = state.geometry;
  double stiff = 1.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const double e1 = geo.e[1][i];
    stiff = std::max(stiff, geo.lambda_prime[i] / (e1 * e1 * geo.lambda[i] * geo.lambda[i]));
  }
  const double h = state.surface.grid->min_spacing();
  return config.dt_safety * h * h / stiff;
}

namespace {

Field velocity(const FlowState& s) {
  Field out(s.speed.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.geometry.v[i] * s.speed[i];
  return out;
}

FlowState with_radii(const FlowState& base, Field r, double t) {
  RadialSurface surface = base.surface;
  surface.r = std::move(r);
  return make_state(std::move(surface), t);
}

Field axpy(const Field& r, double a, const Field& x) {
  Field out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] + a * x[i];
  return out;
}

std::size_t argmin_kappa(const GeometryFields& geo) {
  std::size_t best = 0;
  double lo = std::numeric_limits<double>::infinity();
  for (const Field& k : geo.kappa) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] < lo) {
        lo = k[i];
        best = i;
      }
    }
  }
  return best;
}

}  // namespace

FlowState advance(const FlowState& state, double dt, Stepper stepper) {
  const Field& r = state.surface.r;
  const Field k1 = velocity(state);
  if (stepper == Stepper::euler) return with_radii(state, axpy(r, dt, k1), state.t + dt);

  const FlowState s2 = with_radii(state, axpy(r, 0.5 * dt, k1), state.t + 0.5 * dt);
  const Field k2 = velocity(s2);
  const FlowState s3 = with_radii(state, axpy(r, 0.5 * dt, k2), state.t + 0.5 * dt);
  const Field k3 = velocity(s3);
  const FlowState s4 = with_radii(state, axpy(r, dt, k3), state.t + dt);
  const Field k4 = velocity(s4);
  Field next(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    next[i] = r[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return with_radii(state, std::move(next), state.t + dt);
}

StepResult step(const FlowState& state, const FlowConfig& config, double dt) {
  if (dt <= 0.0) dt = stable_dt(state, config);
  std::string reason;
  std::size_t node = 0;
  for (int halvings = 0; halvings <= config.max_halvings; ++halvings, dt *= 0.5) {
    try {
      FlowState next = advance(state, dt, config.stepper);
      const GeometryFields& geo = next.geometry;
      bool ok = true;
      for (std::size_t i = 0; i < geo.size(); ++i) {
        if (!(geo.u[i] > 0.0)) {
          reason = "starshapedness guard: u <= 0";
          node = i;
          ok = false;
          break;
        }
      }
      if (ok && config.guard_h_convex && geo.h_convex_margin() < -config.tol_guard) {
        reason = "h-convexity guard: min kappa - 1 below -tol_guard";
        node = argmin_kappa(geo);
        ok = false;
      }
      if (ok) return StepResult{std::move(next), dt, halvings};
    } catch (const NodeError& e) {
      reason = e.what();
      node = e.node();
    } catch (const DomainError& e) {
      reason = e.what();
      node = 0;
    }
  }
  throw FlowAbort("flow aborted at t = " + std::to_string(state.t) + ": " + reason, node,
                  state.surface, state.t);
}

// ---------------------------------------------------------------------------
// Trace

FlowTrace::FlowTrace(int n, std::vector<TracedProfile> profiles, std::vector<int> ks,
                     Field initial_r)
    : n_(n), profiles_(std::move(profiles)), ks_(std::move(ks)), initial_r_(std::move(initial_r)) {
  for (int k : ks_) {
    if (k < 1 || k > n_ - 1) throw ConfigError("trace: k must satisfy 1 <= k <= n - 1");
  }
  columns_ = {"t", "area", "W1"};
  for (const auto& p : profiles_) {
    columns_.push_back(frozen_column(p.name));
    columns_.push_back(radial_column(p.name));
  }
  for (const auto& p : profiles_) {
    for (int k : ks_) columns_.push_back(phi2_column(p.name, k));
  }
  for (const char* c : {"min_kappa", "max_kappa", "hconvex_margin", "max_abs_F", "osc_r"}) {
    columns_.emplace_back(c);
  }
}

std::string FlowTrace::frozen_column(const std::string& profile) {
  return "int_fpow_" + profile + "_frozen";
}

std::string FlowTrace::radial_column(const std::string& profile) {
  return "int_fpow_" + profile + "_radial";
}

std::string FlowTrace::phi2_column(const std::string& profile, int k) {
  return "int_Ekm1_phi2_" + profile + "_k" + std::to_string(k);
}

void FlowTrace::record(const FlowState& state) {
  const GeometryFields& geo = state.geometry;
  const SphereGrid& grid = *state.surface.grid;
  const std::size_t size = geo.size();
  const Field& rt = state.surface.r;
  auto integral = [&](auto&& integrand) {
    Field f(size);
    for (std::size_t i = 0; i < size; ++i) f[i] = integrand(i) * geo.area_density[i];
    return grid.integrate(f);
  };

  std::vector<double> row;
  row.reserve(columns_.size());
  row.push_back(state.t);
  const double area = integral([](std::size_t) { return 1.0; });
  row.push_back(area);
  row.push_back(area / n_);
  const double p = static_cast<double>(n_) / (n_ - 1);
  for (const auto& tp : profiles_) {
    row.push_back(integral([&](std::size_t i) { return std::pow(tp.profile.value(initial_r_[i]), p); }));
    row.push_back(integral([&](std::size_t i) { return std::pow(tp.profile.value(rt[i]), p); }));
  }
  for (const auto& tp : profiles_) {
    const Field& base = tp.profile.mode() == EvaluationMode::frozen ? initial_r_ : rt;
    for (int k : ks_) {
      const double q = static_cast<double>(n_ - k + 1) / (n_ - k);
      row.push_back(integral(
          [&](std::size_t i) { return std::pow(tp.profile.value(base[i]), q) * geo.e[k - 1][i]; }));
    }
  }
  row.push_back(geo.min_kappa());
  row.push_back(geo.max_kappa());
  row.push_back(geo.h_convex_margin());
  double fmax = 0.0;
  for (double f : state.speed) fmax = std::max(fmax, std::abs(f));
  row.push_back(fmax);
  const auto [lo, hi] = std::minmax_element(rt.begin(), rt.end());
  row.push_back(*hi - *lo);
  rows_.push_back(std::move(row));
}

std::size_t FlowTrace::column_index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw ConfigError("trace has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> FlowTrace::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row[c]);
  return out;
}

void FlowTrace::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
  out << '\n';
  char buf[32];
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Runs

double exponential_decay_rate(const std::vector<double>& t, const std::vector<double>& values) {
  std::vector<double> xs, ys;
  for (std::size_t i = t.size() / 2; i < t.size(); ++i) {
    if (values[i] > 0.0) {
      xs.push_back(t[i]);
      ys.push_back(std::log(values[i]));
    }
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? -sxy / sxx : 0.0;
}

FlowResult run(const RadialSurface& surface, const FlowConfig& config,
               const std::vector<TracedProfile>& profiles, const std::vector<int>& ks) {
  config.validate();
  if (!surface.closed()) throw PreconditionError("flow.run: surfaces with boundary are not evolved");
  FlowState state = make_state(surface);
  const int n = surface.dim();
  const double margin0 = state.geometry.h_convex_margin();
  if (config.guard_h_convex && margin0 < -config.tol_guard) {
    throw PreconditionError("flow.run: initial surface is not h-convex (min kappa - 1 = " +
                            std::to_string(margin0) + ")");
  }

  FlowResult result;
  result.trace = FlowTrace(n, profiles, ks, surface.r);
  result.trace.record(state);
  const SphereGrid& grid = *surface.grid;
  result.w1_initial = grid.integrate(state.geometry.area_density) / n;
  result.predicted_radius = q1_inverse(result.w1_initial, AmbientModel(n));
  result.min_h_convex_margin = margin0;

  bool recorded = true;
  while (true) {
    double fmax = 0.0;
    for (double f : state.speed) fmax = std::max(fmax, std::abs(f));
    if (fmax < config.stop_speed_tol) {
      result.converged = true;
      break;
    }
    if (state.t >= config.t_max * (1.0 - 1e-14) || result.steps >= config.max_steps) break;
    const double dt = std::min(stable_dt(state, config), config.t_max - state.t);
    StepResult s = step(state, config, dt);
    state = std::move(s.state);
    result.halvings += s.halvings;
    ++result.steps;
    result.min_h_convex_margin =
        std::min(result.min_h_convex_margin, state.geometry.h_convex_margin());
    recorded = result.steps % config.snapshot_stride == 0;
    if (recorded) result.trace.record(state);
  }
  if (!recorded) result.trace.record(state);

  result.w1_final = grid.integrate(state.geometry.area_density) / n;
  const auto w = grid.weights();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * state.surface.r[i];
    den += w[i];
  }
  result.final_radius = num / den;
  result.decay_rate = exponential_decay_rate(result.trace.column("t"), result.trace.column("osc_r"));
  result.final_state = std::move(state);
  return result;
}

EvolutionResiduals evolution_identity_suite(const FlowState& state, double delta, Stepper stepper) {
  const SphereGrid& grid = *state.surface.grid;
  const GeometryFields& geo = state.geometry;
  const int n = geo.n;
  const FlowState fwd = advance(state, delta, stepper);
  const FlowState bwd = advance(state, -delta, stepper);
  const double a_plus = grid.integrate(fwd.geometry.area_density);
  const double a_minus = grid.integrate(bwd.geometry.area_density);

  Field ef(geo.size()), abs_ef(geo.size());
  for (std::size_t i = 0; i < ef.size(); ++i) {
    ef[i] = geo.e[1][i] * state.speed[i] * geo.area_density[i];
    abs_ef[i] = std::abs(ef[i]);
  }
  EvolutionResiduals out;
  out.area_rate = (a_plus - a_minus) / (2.0 * delta);
  out.area_expected = n * grid.integrate(ef);
  out.w1_rate = out.area_rate / n;
  out.w1_expected = grid.integrate(ef);
  out.scale = n * grid.integrate(abs_ef);
  out.area_abs = std::abs(out.area_rate - out.area_expected);
  out.w1_abs = std::abs(out.w1_rate - out.w1_expected);
  const double tiny = std::numeric_limits<double>::min();
  out.area_residual = out.area_abs / std::max(out.scale, tiny);
  out.w1_residual = out.w1_abs / std::max(out.scale / n, tiny);
  return out;
}

}  // namespace hypflow
