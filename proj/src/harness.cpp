#include "hrde/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hrde/csv.hpp"
#include "hrde/rng.hpp"

namespace hrde {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config." + path + ": " + what);
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) fail(key, "missing required field");
  return doc.at(key);
}

double get_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "must be a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double get_positive(const json& node, const std::string& path) {
  const double v = get_number(node, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

std::uint64_t get_seed(const json& node, const std::string& path) {
  if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0))
    fail(path, "must be a nonnegative integer");
  return node.get<std::uint64_t>();
}

int get_positive_int(const json& node, const std::string& path) {
  if (!node.is_number_integer() || node.get<std::int64_t>() < 1)
    fail(path, "must be a positive integer");
  return node.get<int>();
}

std::string get_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "must be a string");
  return node.get<std::string>();
}

template <typename Fn>
auto parse_enum(const json& node, const std::string& path, Fn&& parse) {
  const std::string id = get_string(node, path);
  try {
    return parse(id);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::vector<double> parse_spectrum(const json& node) {
  if (node.is_array()) {
    if (node.empty()) fail("spectrum", "must not be empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(get_positive(node[i], "spectrum[" + std::to_string(i) + "]"));
    return out;
  }
  if (node.is_object()) {
    const int count = get_positive_int(require(node, "count"), "spectrum.count");
    const double lo = get_positive(require(node, "lo"), "spectrum.lo");
    const double hi = get_positive(require(node, "hi"), "spectrum.hi");
    if (hi < lo) fail("spectrum.hi", "must be >= spectrum.lo");
    return SpectrumSpec::log_spaced(count, lo, hi).eigenvalues();
  }
  fail("spectrum", "must be an array of eigenvalues or {count, lo, hi}");
}

const std::set<std::string> kKnownKeys{
    "name", "objective", "spectrum", "rotation_seed", "data_seed", "n_samples", "dim",
    "reg",  "method",    "beta",     "x0",            "s",         "K",         "lyapunov",
    "bound", "first_velocity", "seed", "output", "s_resolved"};

}  // namespace

Objective make_objective(const ObjectiveSpec& spec) {
  if (spec.id == "quad") return make_quadratic(SpectrumSpec(spec.spectrum));
  if (spec.id == "quad-rot")
    return make_quadratic(SpectrumSpec(spec.spectrum), spec.rotation_seed.value_or(0));
  if (spec.id == "reg-logistic")
    return make_reg_logistic(spec.data_seed, spec.n_samples, spec.dim, spec.reg);
  throw std::invalid_argument("unknown objective '" + spec.id + "'");
}

double resolve_step(const StepSpec& spec, double mu, double L) {
  if (const double* v = std::get_if<double>(&spec)) return *v;
  const std::string& sym = std::get<std::string>(spec);
  if (sym == "1/L") return 1.0 / L;
  if (sym == "1/(2L)") return 1.0 / (2.0 * L);
  if (sym == "1/(4mu)") return 1.0 / (4.0 * mu);
  throw std::invalid_argument("unknown symbolic step '" + sym + "'");
}

Vector resolve_start(const ExperimentConfig& config, int dim) {
  if (const auto* explicit_point = std::get_if<std::vector<double>>(&config.x0)) {
    if (static_cast<int>(explicit_point->size()) != dim)
      throw ConfigError("config.x0: length " + std::to_string(explicit_point->size()) +
                        " does not match objective dimension " + std::to_string(dim));
    return Eigen::Map<const Vector>(explicit_point->data(), dim);
  }
  const auto& ball = std::get<SeededBall>(config.x0);
  Rng rng(ball.seed);
  return rng.in_ball(Vector::Zero(dim), ball.radius);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& item : doc.items())
    if (!kKnownKeys.contains(item.key())) fail(item.key(), "unknown field");

  ExperimentConfig cfg;
  if (doc.contains("seed")) cfg.seed = get_seed(doc["seed"], "seed");
  if (doc.contains("name")) cfg.name = get_string(doc["name"], "name");
  if (cfg.name.empty()) fail("name", "must not be empty");

  ObjectiveSpec& obj = cfg.objective;
  obj.id = get_string(require(doc, "objective"), "objective");
  if (obj.id == "quad" || obj.id == "quad-rot") {
    obj.spectrum = parse_spectrum(require(doc, "spectrum"));
    if (obj.id == "quad-rot")
      obj.rotation_seed =
          doc.contains("rotation_seed") ? get_seed(doc["rotation_seed"], "rotation_seed") : cfg.seed;
    else if (doc.contains("rotation_seed"))
      fail("rotation_seed", "only valid for objective quad-rot");
  } else if (obj.id == "reg-logistic") {
    obj.data_seed = doc.contains("data_seed") ? get_seed(doc["data_seed"], "data_seed") : cfg.seed;
    obj.n_samples = get_positive_int(require(doc, "n_samples"), "n_samples");
    obj.dim = get_positive_int(require(doc, "dim"), "dim");
    obj.reg = get_positive(require(doc, "reg"), "reg");
  } else {
    fail("objective", "unknown objective '" + obj.id + "' (expected quad, quad-rot, reg-logistic)");
  }

  cfg.method = parse_enum(require(doc, "method"), "method", parse_method);
  if (doc.contains("beta")) {
    if (cfg.method != Method::heavy_ball) fail("beta", "only valid for method heavy-ball");
    const double beta = get_number(doc["beta"], "beta");
    if (!(beta >= 0.0 && beta < 1.0)) fail("beta", "must be in [0, 1)");
    cfg.beta = beta;
  }

  const json& s_node = require(doc, "s");
  if (s_node.is_string()) {
    const std::string sym = s_node.get<std::string>();
    if (sym != "1/L" && sym != "1/(2L)" && sym != "1/(4mu)")
      fail("s", "symbolic step must be one of 1/L, 1/(2L), 1/(4mu)");
    cfg.s = sym;
  } else {
    cfg.s = get_positive(s_node, "s");
  }

  const json& k_node = require(doc, "K");
  if (!k_node.is_number_integer() || k_node.get<std::int64_t>() < 0)
    fail("K", "must be a nonnegative integer");
  cfg.K = k_node.get<std::size_t>();

  if (doc.contains("x0")) {
    const json& x0 = doc["x0"];
    if (x0.is_array()) {
      std::vector<double> point;
      for (std::size_t i = 0; i < x0.size(); ++i)
        point.push_back(get_number(x0[i], "x0[" + std::to_string(i) + "]"));
      cfg.x0 = std::move(point);
    } else if (x0.is_object()) {
      SeededBall ball;
      ball.radius = x0.contains("radius") ? get_positive(x0["radius"], "x0.radius") : 1.0;
      ball.seed = x0.contains("seed") ? get_seed(x0["seed"], "x0.seed") : cfg.seed;
      for (const auto& item : x0.items())
        if (item.key() != "radius" && item.key() != "seed") fail("x0." + item.key(), "unknown field");
      cfg.x0 = ball;
    } else {
      fail("x0", "must be an array or {radius, seed}");
    }
  } else {
    cfg.x0 = SeededBall{1.0, cfg.seed};
  }

  if (doc.contains("lyapunov")) {
    cfg.lyapunov = parse_enum(doc["lyapunov"], "lyapunov", parse_lyapunov_form);
    const bool ok = *cfg.lyapunov == LyapunovForm::gc ? is_gc_scheme(cfg.method)
                                                      : is_iv_scheme(cfg.method);
    if (!ok) fail("lyapunov", "form does not match method " + std::string(to_string(cfg.method)));
  }
  if (doc.contains("bound")) {
    cfg.bound = parse_enum(doc["bound"], "bound", parse_bound_theorem);
    if (!bound_applies(cfg.method, *cfg.bound))
      fail("bound", "theorem does not apply to method " + std::string(to_string(cfg.method)));
  }
  if (doc.contains("first_velocity")) {
    cfg.first_velocity = parse_enum(doc["first_velocity"], "first_velocity", parse_first_velocity);
    if (cfg.first_velocity != FirstVelocity::scheme && !is_iv_scheme(cfg.method))
      fail("first_velocity", "only valid for nag-modified and iv-phase");
  }
  cfg.output_path = doc.contains("output") ? get_string(doc["output"], "output") : cfg.name;

  Objective f = [&] {
    try {
      return make_objective(cfg.objective);
    } catch (const std::invalid_argument& e) {
      fail("objective", e.what());
    }
  }();
  cfg.s_resolved = resolve_step(cfg.s, f.mu(), f.lipschitz());
  if (!(cfg.s_resolved > 0.0)) fail("s", "must resolve to a positive step");
  if (const auto* point = std::get_if<std::vector<double>>(&cfg.x0);
      point && static_cast<int>(point->size()) != f.dim())
    fail("x0", "length does not match objective dimension " + std::to_string(f.dim()));
  return cfg;
}

std::string dump_config(const ExperimentConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["objective"] = cfg.objective.id;
  if (cfg.objective.id == "reg-logistic") {
    doc["data_seed"] = cfg.objective.data_seed;
    doc["n_samples"] = cfg.objective.n_samples;
    doc["dim"] = cfg.objective.dim;
    doc["reg"] = cfg.objective.reg;
  } else {
    doc["spectrum"] = cfg.objective.spectrum;
    if (cfg.objective.rotation_seed) doc["rotation_seed"] = *cfg.objective.rotation_seed;
  }
  doc["method"] = std::string(to_string(cfg.method));
  if (cfg.beta) doc["beta"] = *cfg.beta;
  if (const auto* point = std::get_if<std::vector<double>>(&cfg.x0)) {
    doc["x0"] = *point;
  } else {
    const auto& ball = std::get<SeededBall>(cfg.x0);
    doc["x0"] = {{"radius", ball.radius}, {"seed", ball.seed}};
  }
  if (const double* v = std::get_if<double>(&cfg.s))
    doc["s"] = *v;
  else
    doc["s"] = std::get<std::string>(cfg.s);
  doc["s_resolved"] = cfg.s_resolved;
  doc["K"] = cfg.K;
  if (cfg.lyapunov) doc["lyapunov"] = std::string(to_string(*cfg.lyapunov));
  if (cfg.bound) doc["bound"] = std::string(to_string(*cfg.bound));
  doc["first_velocity"] = std::string(to_string(cfg.first_velocity));
  doc["seed"] = cfg.seed;
  doc["output"] = cfg.output_path;
  return doc.dump(2) + "\n";
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return env;
  return std::filesystem::current_path();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

ExecutionResult execute(const ExperimentConfig& cfg,
                        std::optional<std::filesystem::path> output_root) {
  const Objective f = resolve_minimizer(make_objective(cfg.objective));
  const Vector x0 = resolve_start(cfg, f.dim());
  RunOptions options;
  options.beta = cfg.beta;
  options.first_velocity = cfg.first_velocity;
  Trajectory traj = run(f, cfg.method, x0, cfg.s_resolved, cfg.K, options);

  ExecutionResult result;
  auto add = [&](std::string key, std::string value) {
    result.lines.push_back({std::move(key), std::move(value)});
  };
  const bool step_ok = cfg.s_resolved * f.lipschitz() <= 1.0 + 1e-12;

  add("name", cfg.name);
  add("objective", f.id());
  add("method", std::string(to_string(cfg.method)));
  add("dim", std::to_string(f.dim()));
  add("mu", csv::format_double(f.mu()));
  add("L", csv::format_double(f.lipschitz()));
  add("s", csv::format_double(cfg.s_resolved));
  add("K", std::to_string(cfg.K));
  add("records", std::to_string(traj.records.size()));
  add("final_f_gap", csv::format_double(traj.records.back().f_gap));
  add("aborted_at", traj.aborted_at ? std::to_string(*traj.aborted_at) : "none");
  for (const auto& w : traj.warnings) add("warning", w);
  if (traj.aborted_at) result.passed = false;

  if (cfg.lyapunov) {
    attach_lyapunov(traj, f, *cfg.lyapunov);
    const ContractionReport rep = certify_contraction(traj, *cfg.lyapunov);
    add("lyapunov_form", std::string(to_string(*cfg.lyapunov)));
    add("lyapunov_E0", csv::format_double(*traj.records.front().lyapunov));
    if (*cfg.lyapunov == LyapunovForm::iv && cfg.first_velocity == FirstVelocity::scheme)
      add("lyapunov_E0_zero_v1", csv::format_double(initial_energy_iv(
                                     f, x0, cfg.s_resolved, FirstVelocity::zero)));
    add("contraction_rho", csv::format_double(rep.rho));
    add("contraction_guaranteed", fmt_bool(step_ok));
    add("contraction_violations", std::to_string(rep.cert.failures));
    add("contraction_max_ratio", csv::format_double(rep.max_ratio));
    if (step_ok && !rep.cert.passed()) result.passed = false;
  }
  if (cfg.bound) {
    attach_bound(traj, *cfg.bound);
    const BoundReport rep = check_bound(traj, *cfg.bound);
    add("bound_theorem", std::string(to_string(*cfg.bound)));
    add("bound_quantity", std::string(rep.quantity));
    add("bound_guaranteed", fmt_bool(rep.guaranteed));
    add("bound_violations", std::to_string(rep.cert.failures));
    add("bound_worst_margin", csv::format_double(rep.cert.worst_margin));
    if (rep.cert.first_failure) add("bound_first_violation_k", std::to_string(*rep.cert.first_failure));
    if (rep.guaranteed && !rep.cert.passed()) result.passed = false;
  }
  add("status", result.passed ? "pass" : "fail");

  std::filesystem::path dir = cfg.output_path;
  if (dir.is_relative()) dir = output_root.value_or(default_output_root()) / dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  result.directory = dir;
  result.trajectory_csv = dir / "trajectory.csv";
  result.summary = dir / "summary.txt";
  result.config_echo = dir / "config.json";

  std::ostringstream csv_text;
  csv::write_trajectory(csv_text, traj);
  write_file(result.trajectory_csv, csv_text.str());

  std::ostringstream summary;
  for (const auto& line : result.lines) summary << line.key << ": " << line.value << '\n';
  write_file(result.summary, summary.str());
  write_file(result.config_echo, dump_config(cfg));
  return result;
}

}  // namespace hrde
