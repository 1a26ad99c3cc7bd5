#include "hypflow_cli/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace hypflow::cli {
namespace {

// Reads one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    if (!doc.is_object()) throw ConfigError(path_ + " must be an object");
    doc_ = &doc;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_->contains(key) && !(*doc_)[key].is_null();
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = (*doc_)[key].get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + " has the wrong type");
    }
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return (*doc_)[key];
  }

  void finish() const {
    for (const auto& item : doc_->items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + path_ + "." + item.key());
    }
  }

 private:
  const json* doc_;
  std::string path_;
  std::set<std::string> seen_;
};

EvaluationMode mode_from_string(const std::string& name) {
  if (name == "frozen") return EvaluationMode::frozen;
  if (name == "radial") return EvaluationMode::radial;
  throw ConfigError("unknown evaluation mode '" + name + "' (expected frozen or radial)");
}

GridSpec parse_grid(const json& doc) {
  GridSpec g;
  Section s(doc, "grid");
  std::string mode = to_string(g.mode);
  s.read("mode", mode);
  g.mode = grid_mode_from_string(mode);
  s.read("n", g.n);
  s.read("ntheta", g.ntheta);
  s.read("nphi", g.nphi);
  s.read("fd_order", g.fd_order);
  s.finish();
  return g;
}

SurfaceSpec parse_surface(const json& doc) {
  SurfaceSpec spec;
  Section s(doc, "surface");
  s.read("generator", spec.generator);
  s.read("radius", spec.radius);
  s.read("eps", spec.eps);
  s.read("l", spec.l);
  s.read("coefficients", spec.coefficients);
  s.read("snapshot", spec.snapshot);
  if (s.has("cap_theta")) {
    double theta = 0.0;
    s.read("cap_theta", theta);
    spec.cap_theta = theta;
  }
  s.read("require_h_convex", spec.require_h_convex);
  s.finish();
  return spec;
}

WeightSpec parse_weight(const json& doc, std::size_t index) {
  WeightSpec w;
  Section s(doc, "weights[" + std::to_string(index) + "]");
  s.read("name", w.name);
  s.read("kind", w.kind);
  s.read("value", w.value);
  s.read("p", w.p);
  s.read("a", w.a);
  s.read("scale", w.scale);
  s.read("r", w.r);
  s.read("values", w.values);
  std::string mode = to_string(w.mode);
  s.read("mode", mode);
  w.mode = mode_from_string(mode);
  std::string ext = to_string(w.extension);
  s.read("extension", ext);
  w.extension = extension_from_string(ext);
  s.finish();
  if (w.name.empty()) w.name = "w" + std::to_string(index);
  return w;
}

FlowSpec parse_flow(const json& doc) {
  FlowSpec f;
  Section s(doc, "flow");
  s.read("dt_safety", f.config.dt_safety);
  s.read("t_max", f.config.t_max);
  s.read("stop_speed_tol", f.config.stop_speed_tol);
  s.read("snapshot_stride", f.config.snapshot_stride);
  s.read("guard_h_convex", f.config.guard_h_convex);
  s.read("tol_guard", f.config.tol_guard);
  s.read("max_halvings", f.config.max_halvings);
  s.read("max_steps", f.config.max_steps);
  std::string stepper = to_string(f.config.stepper);
  s.read("stepper", stepper);
  f.config.stepper = stepper_from_string(stepper);
  s.read("plots", f.plots);
  s.read("w1_tolerance", f.w1_tolerance);
  s.read("monotone_slack", f.monotone_slack);
  s.read("radius_tolerance", f.radius_tolerance);
  s.finish();
  return f;
}

SweepSpec parse_sweep(const json& doc) {
  SweepSpec w;
  Section s(doc, "sweep");
  s.read("command", w.command);
  s.read("n", w.n);
  s.read("ntheta", w.ntheta);
  s.read("radius", w.radius);
  s.read("eps", w.eps);
  s.read("l", w.l);
  s.read("k", w.k);
  s.read("jobs", w.jobs);
  s.finish();
  return w;
}

json weight_json(const WeightSpec& w) {
  json j = {{"name", w.name}, {"kind", w.kind}, {"mode", to_string(w.mode)},
            {"extension", to_string(w.extension)}};
  if (w.kind == "constant") j["value"] = w.value;
  if (w.kind == "power") j["p"] = w.p;
  if (w.kind == "exponential") j["a"] = w.a;
  if (w.kind == "power" || w.kind == "exponential") j["scale"] = w.scale;
  if (w.kind == "table") {
    j["r"] = w.r;
    j["values"] = w.values;
  }
  return j;
}

}  // namespace

WeightProfile WeightSpec::build() const {
  WeightProfile out = [&] {
    if (kind == "constant") return WeightProfile::constant(value);
    if (kind == "power") return WeightProfile::power(p, scale);
    if (kind == "exponential") return WeightProfile::exponential(a, scale);
    if (kind == "table") return WeightProfile::table(r, values);
    throw ConfigError("unknown weight kind '" + kind + "'");
  }();
  out.with_mode(mode).with_extension(extension);
  return out;
}

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig c;
  c.source = doc;
  Section s(doc, "config");
  if (s.has("grid")) c.grid = parse_grid(s.at("grid"));
  if (s.has("surface")) c.surface = parse_surface(s.at("surface"));
  if (s.has("weights")) {
    const json& list = s.at("weights");
    if (!list.is_array()) throw ConfigError("weights must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) c.weights.push_back(parse_weight(list[i], i));
  }
  if (c.weights.empty()) {
    WeightSpec one;
    one.name = "one";
    c.weights.push_back(one);
  }
  s.read("k", c.ks);
  if (s.has("flow")) c.flow = parse_flow(s.at("flow"));
  if (s.has("output")) {
    Section out(s.at("output"), "output");
    out.read("dir", c.output_dir);
    out.finish();
  }
  if (s.has("sweep")) c.sweep = parse_sweep(s.at("sweep"));
  s.read("seed", c.seed);
  s.finish();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig c = from_json(doc);
  // Snapshot paths are relative to the config file.
  if (!c.surface.snapshot.empty() && std::filesystem::path(c.surface.snapshot).is_relative()) {
    c.surface.snapshot = (path.parent_path() / c.surface.snapshot).lexically_normal().string();
  }
  return c;
}

json RunConfig::resolved() const {
  json j;
  j["grid"] = {{"mode", to_string(grid.mode)},
               {"n", grid.n},
               {"ntheta", grid.ntheta},
               {"nphi", grid.nphi},
               {"fd_order", grid.fd_order}};
  json surf = {{"generator", surface.generator},
               {"radius", surface.radius},
               {"eps", surface.eps},
               {"l", surface.l},
               {"require_h_convex", surface.require_h_convex}};
  if (!surface.coefficients.empty()) surf["coefficients"] = surface.coefficients;
  if (!surface.snapshot.empty()) surf["snapshot"] = surface.snapshot;
  if (surface.cap_theta) surf["cap_theta"] = *surface.cap_theta;
  j["surface"] = surf;
  j["weights"] = json::array();
  for (const auto& w : weights) j["weights"].push_back(weight_json(w));
  j["k"] = ks;
  if (flow) {
    const FlowConfig& f = flow->config;
    j["flow"] = {{"dt_safety", f.dt_safety},
                 {"t_max", f.t_max},
                 {"stop_speed_tol", f.stop_speed_tol},
                 {"snapshot_stride", f.snapshot_stride},
                 {"guard_h_convex", f.guard_h_convex},
                 {"tol_guard", f.tol_guard},
                 {"max_halvings", f.max_halvings},
                 {"max_steps", f.max_steps},
                 {"stepper", to_string(f.stepper)},
                 {"plots", flow->plots},
                 {"w1_tolerance", flow->w1_tolerance},
                 {"monotone_slack", flow->monotone_slack},
                 {"radius_tolerance", flow->radius_tolerance}};
  }
  j["output"] = {{"dir", output_dir}};
  if (sweep) {
    j["sweep"] = {{"command", sweep->command}, {"n", sweep->n},     {"ntheta", sweep->ntheta},
                  {"radius", sweep->radius},   {"eps", sweep->eps}, {"l", sweep->l},
                  {"k", sweep->k},             {"jobs", sweep->jobs}};
  }
  j["seed"] = seed;
  return j;
}

void RunConfig::validate() const {
  if (surface.generator != "snapshot") make_grid();
  const int n = grid.n;
  if (surface.cap_theta) {
    if (grid.mode != GridMode::axisym) {
      throw ConfigError("surface.cap_theta: caps are supported in axisym mode only");
    }
    const double t = *surface.cap_theta;
    if (!(t > 0.0 && t < std::numbers::pi)) throw ConfigError("surface.cap_theta must lie in (0, pi)");
    if (flow) throw ConfigError("flow: surfaces with boundary are not evolved");
  }
  static const std::set<std::string> generators{"sphere", "perturbed_sphere", "blob", "snapshot"};
  if (!generators.count(surface.generator)) {
    throw ConfigError("surface.generator '" + surface.generator +
                      "' is not one of sphere, perturbed_sphere, blob, snapshot");
  }
  if (surface.generator == "blob" && surface.coefficients.empty()) {
    throw ConfigError("surface.coefficients is required for the blob generator");
  }
  if (surface.generator == "snapshot" && surface.snapshot.empty()) {
    throw ConfigError("surface.snapshot is required for the snapshot generator");
  }
  if (surface.l < 0) throw ConfigError("surface.l must be nonnegative");
  if (ks.empty()) throw ConfigError("k must list at least one order");
  for (int k : ks) {
    if (surface.generator == "snapshot") break;  // checked once the snapshot is read
    if (k == n) {
      throw ConfigError("k = n = " + std::to_string(n) +
                        " is not supported (the exponent (n-k+1)/(n-k) is singular)");
    }
    if (k < 1 || k > n - 1) throw ConfigError("k must satisfy 1 <= k <= n - 1");
  }
  std::set<std::string> names;
  for (const auto& w : weights) {
    for (char ch : w.name) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) {
        throw ConfigError("weight name '" + w.name + "' may only use [A-Za-z0-9_]");
      }
    }
    if (!names.insert(w.name).second) throw ConfigError("duplicate weight name '" + w.name + "'");
    try {
      w.build();
    } catch (const PreconditionError& e) {
      throw ConfigError("weight '" + w.name + "': " + e.what());
    }
  }
  if (flow) flow->config.validate();
  if (sweep) {
    if (sweep->command != "verify" && sweep->command != "flow") {
      throw ConfigError("sweep.command must be verify or flow");
    }
    if (sweep->jobs < 1) throw ConfigError("sweep.jobs must be >= 1");
    if (sweep->command == "flow" && !flow) throw ConfigError("sweep.command flow needs a flow section");
  }
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
  const std::filesystem::path out(output_dir);
  if (std::filesystem::exists(out) && !std::filesystem::is_directory(out)) {
    throw ConfigError("output.dir " + output_dir + " exists and is not a directory");
  }
}

std::shared_ptr<const SphereGrid> RunConfig::make_grid() const {
  return std::make_shared<const SphereGrid>(
      SphereGrid::build(grid.mode, grid.n, grid.ntheta, grid.nphi, grid.fd_order));
}

RadialSurface RunConfig::make_surface() const {
  GeneratorOptions opts;
  opts.require_h_convex = surface.require_h_convex;
  opts.cap_limit = surface.cap_theta;
  if (surface.generator == "snapshot") {
    std::ifstream in(surface.snapshot);
    if (!in) throw ConfigError("cannot open snapshot " + surface.snapshot);
    RadialSurface s = read_snapshot(in, grid.fd_order);
    s.cap_limit = surface.cap_theta;
    s.id = "snapshot(" + std::filesystem::path(surface.snapshot).filename().string() + ")";
    s.validate();
    return s;
  }
  const auto g = make_grid();
  if (surface.generator == "sphere") return make_sphere(g, surface.radius, opts);
  if (surface.generator == "perturbed_sphere") {
    return make_perturbed_sphere(g, surface.radius, surface.eps, surface.l, opts);
  }
  return make_axisym_blob(g, surface.coefficients, opts);
}

std::vector<WeightProfile> RunConfig::profiles() const {
  std::vector<WeightProfile> out;
  for (const auto& w : weights) out.push_back(w.build());
  return out;
}

}  // namespace hypflow::cli
