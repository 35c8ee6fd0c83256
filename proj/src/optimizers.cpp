#include "hrde/optimizers.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hrde {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::gd, "gd"},
    {Method::heavy_ball, "heavy-ball"},
    {Method::nag_classic, "nag-classic"},
    {Method::nag_modified, "nag-modified"},
    {Method::gc_modified, "gc-modified"},
    {Method::gc_phase, "gc-phase"},
    {Method::iv_phase, "iv-phase"},
}};

void require_dim(const Objective& f, const OptimizerState& state) {
  const auto d = f.dim();
  if (state.x.size() != d || state.y.size() != d || state.v.size() != d)
    throw std::invalid_argument("optimizer state dimension does not match objective");
}

bool all_finite(const OptimizerState& s) {
  return s.x.allFinite() && s.y.allFinite() && s.v.allFinite();
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

Method parse_method(std::string_view id) {
  for (const auto& [method, name] : kMethodNames)
    if (name == id) return method;
  throw std::invalid_argument("unknown method '" + std::string(id) + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (const auto& entry : kMethodNames) out.push_back(entry.first);
    return out;
  }();
  return methods;
}

bool is_nag_family(Method m) {
  return m == Method::nag_classic || m == Method::nag_modified || m == Method::gc_modified ||
         m == Method::gc_phase || m == Method::iv_phase;
}

bool is_gc_scheme(Method m) { return m == Method::gc_modified || m == Method::gc_phase; }

bool is_iv_scheme(Method m) { return m == Method::nag_modified || m == Method::iv_phase; }

double modified_momentum(double mu, double s) { return 1.0 / (1.0 + 2.0 * std::sqrt(mu * s)); }

double classic_momentum(double mu, double s) {
  const double r = std::sqrt(mu * s);
  return (1.0 - r) / (1.0 + r);
}

double default_heavy_ball_beta(double mu, double s) {
  const double c = classic_momentum(mu, s);
  return c * c;
}

OptimizerState initial_state(const Objective& f, Method method, const Vector& x0, double s) {
  if (x0.size() != f.dim()) throw std::invalid_argument("x0 dimension does not match objective");
  if (!(s > 0.0)) throw std::invalid_argument("step size must be positive");
  OptimizerState state;
  state.x = x0;
  state.y = x0;
  state.v = Vector::Zero(f.dim());
  state.y_prev = x0;
  state.k = 0;
  state.s = s;
  state.grad_prev = is_gc_scheme(method) ? f.gradient(x0) : Vector::Zero(f.dim());
  return state;
}

OptimizerState gd_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
  OptimizerState next = state;
  next.x = state.x - state.s * f.gradient(state.x);
  next.k = state.k + 1;
  return next;
}

OptimizerState heavy_ball_step(const Objective& f, const OptimizerState& state, double beta) {
  require_dim(f, state);
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("heavy-ball beta must be in [0,1)");
  OptimizerState next = state;
  next.x = state.x - state.s * f.gradient(state.x) + beta * state.v;
  next.v = next.x - state.x;
  next.y = next.x;
  next.k = state.k + 1;
  return next;
}

OptimizerState nag_classic_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
  const double coef = classic_momentum(f.mu(), state.s);
  OptimizerState next = state;
  next.x = state.y - state.s * f.gradient(state.y);
  next.y = next.x + coef * (next.x - state.x);
  next.v = (next.x - state.x) / std::sqrt(state.s);
  next.k = state.k + 1;
  return next;
}

OptimizerState nag_modified_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
#ifdef HRDE_MUTANT_MOMENTUM
  const double coef = 1.0 / (1.0 + std::sqrt(f.mu() * state.s));
#else
  const double coef = modified_momentum(f.mu(), state.s);
#endif
  OptimizerState next = state;
  next.x = state.y - state.s * f.gradient(state.y);
  next.y = next.x + coef * (next.x - state.x);
  next.v = (next.x - state.x) / std::sqrt(state.s);
  next.k = state.k + 1;
  return next;
}

GcStepResult gc_modified_step(const Objective& f, const Vector& y_curr, const Vector& y_prev,
                              const Vector& grad_prev, double s, double mu) {
  if (y_curr.size() != f.dim() || y_prev.size() != f.dim() || grad_prev.size() != f.dim())
    throw std::invalid_argument("gc_modified_step: dimension mismatch");
  const double c = 1.0 + 2.0 * std::sqrt(mu * s);
  GcStepResult out;
  out.grad_curr = f.gradient(y_curr);
  out.y_next = y_curr + ((y_curr - y_prev) - s * out.grad_curr - s * (out.grad_curr - grad_prev)) / c;
  return out;
}

OptimizerState gc_modified_state_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
  GcStepResult r = gc_modified_step(f, state.y, state.y_prev, state.grad_prev, state.s, f.mu());
  OptimizerState next = state;
  next.x = state.y - state.s * r.grad_curr;
  next.v = (r.y_next - state.y) / std::sqrt(state.s);
  next.y_prev = state.y;
  next.y = std::move(r.y_next);
  next.grad_prev = std::move(r.grad_curr);
  next.k = state.k + 1;
  return next;
}

OptimizerState gc_phase_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
  const double root_s = std::sqrt(state.s);
  const double c = 1.0 + 2.0 * std::sqrt(f.mu() * state.s);
  const Vector grad = f.gradient(state.y);
  OptimizerState next = state;
  next.v = (state.v - root_s * (2.0 * grad - state.grad_prev)) / c;
  next.y = state.y + root_s * next.v;
  next.x = state.y - state.s * grad;
  next.y_prev = state.y;
  next.grad_prev = grad;
  next.k = state.k + 1;
  return next;
}

OptimizerState iv_phase_step(const Objective& f, const OptimizerState& state) {
  require_dim(f, state);
  const double root_s = std::sqrt(state.s);
  const double c = 1.0 + 2.0 * std::sqrt(f.mu() * state.s);
  const Vector grad = f.gradient(state.y);
  OptimizerState next = state;
  next.v = state.v - (2.0 * std::sqrt(f.mu() * state.s) / c) * state.v - root_s * grad;
  next.x = state.x + root_s * next.v;
  next.y = next.x + (root_s / c) * next.v;
  next.k = state.k + 1;
  return next;
}

std::string_view to_string(FirstVelocity fv) {
  switch (fv) {
    case FirstVelocity::scheme: return "scheme";
    case FirstVelocity::zero: return "zero";
    case FirstVelocity::gradient: return "gradient";
  }
  return "unknown";
}

FirstVelocity parse_first_velocity(std::string_view id) {
  if (id == "scheme") return FirstVelocity::scheme;
  if (id == "zero") return FirstVelocity::zero;
  if (id == "gradient") return FirstVelocity::gradient;
  throw std::invalid_argument("unknown first-velocity convention '" + std::string(id) + "'");
}

namespace {

// Replaces the v_1 produced by the recursion with the requested convention.
void override_first_velocity(const Objective& f, const OptimizerState& start,
                             OptimizerState& first, FirstVelocity fv) {
  const double root_s = std::sqrt(start.s);
  const double a = std::sqrt(f.mu() * start.s);
  const double c = 1.0 + 2.0 * a;
  if (fv == FirstVelocity::zero) {
    first.v = Vector::Zero(f.dim());
  } else {
    first.v = 2.0 * a * f.gradient(start.y);
  }
  first.x = start.x + root_s * first.v;
  first.y = first.x + (root_s / c) * first.v;
}

OptimizerState dispatch(const Objective& f, Method method, const OptimizerState& state,
                        const RunOptions& options) {
  switch (method) {
    case Method::gd: return gd_step(f, state);
    case Method::heavy_ball:
      return heavy_ball_step(f, state,
                             options.beta.value_or(default_heavy_ball_beta(f.mu(), state.s)));
    case Method::nag_classic: return nag_classic_step(f, state);
    case Method::nag_modified: return nag_modified_step(f, state);
    case Method::gc_modified: return gc_modified_state_step(f, state);
    case Method::gc_phase: return gc_phase_step(f, state);
    case Method::iv_phase: return iv_phase_step(f, state);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace

OptimizerState step(const Objective& f, Method method, const OptimizerState& state,
                    const RunOptions& options) {
  OptimizerState next = dispatch(f, method, state, options);
  if (state.k == 0 && options.first_velocity != FirstVelocity::scheme) {
    if (!is_iv_scheme(method))
      throw std::invalid_argument("first-velocity override applies to nag-modified and iv-phase only");
    override_first_velocity(f, state, next, options.first_velocity);
  }
  return next;
}

namespace {

TrajectoryRecord make_record(const Objective& f, Method method, const OptimizerState& state) {
  TrajectoryRecord rec;
  rec.state = state;
  rec.fx_gap = f.gap(state.x);
  if (is_nag_family(method)) {
    rec.fy_gap = f.gap(state.y);
    rec.f_gap = rec.fy_gap;
    rec.grad_norm = f.gradient(state.y).norm();
  } else {
    rec.fy_gap = rec.fx_gap;
    rec.f_gap = rec.fx_gap;
    rec.grad_norm = f.gradient(state.x).norm();
  }
  return rec;
}

}  // namespace

Trajectory run(const Objective& objective, Method method, const Vector& x0, double s,
               std::size_t K, const RunOptions& options) {
  const Objective f = resolve_minimizer(objective);
  if (options.first_velocity != FirstVelocity::scheme && !is_iv_scheme(method))
    throw std::invalid_argument("first-velocity override applies to nag-modified and iv-phase only");

  Trajectory traj;
  traj.method = method;
  traj.objective_id = f.id();
  traj.s = s;
  traj.mu = f.mu();
  traj.lipschitz = f.lipschitz();
  traj.first_velocity = options.first_velocity;

  OptimizerState state = initial_state(f, method, x0, s);
  traj.f_x0_gap = f.gap(x0);
  traj.dist0_sq = f.dist_sq(x0);

  if (s * f.lipschitz() > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "step size s=" << s << " exceeds 1/L=" << 1.0 / f.lipschitz()
        << "; convergence bounds are not guaranteed";
    traj.warnings.push_back(msg.str());
  }
  if (method == Method::nag_classic && f.mu() * s > 1.0)
    traj.warnings.push_back("nag-classic with mu*s > 1: momentum coefficient is negative");

  traj.records.reserve(K + 1);
  traj.records.push_back(make_record(f, method, state));
  for (std::size_t k = 0; k < K; ++k) {
    OptimizerState next = step(f, method, state, options);
    if (!all_finite(next)) {
      traj.aborted_at = next.k;
      break;
    }
    TrajectoryRecord rec = make_record(f, method, next);
    // Finite iterates can still overflow the objective.
    if (!std::isfinite(rec.fx_gap) || !std::isfinite(rec.fy_gap) || !std::isfinite(rec.grad_norm)) {
      traj.aborted_at = next.k;
      break;
    }
    state = std::move(next);
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

Objective resolve_minimizer(const Objective& f) {
  if (f.has_minimizer()) return f;
  detail::MinimizerCache& cache = f.minimizer_cache();
  std::call_once(cache.once, [&] {
    const double s = 1.0 / f.lipschitz();
    const double coef = modified_momentum(f.mu(), s);
    Vector x = Vector::Zero(f.dim());
    Vector y = x;
    constexpr std::size_t kMaxIterations = 10'000'000;
    for (std::size_t k = 0; k < kMaxIterations; ++k) {
      const Vector g = f.gradient(y);
      if (g.norm() <= kMinimizerSolveTolerance) {
        cache.minimizer = y;
        cache.min_value = f.value(y);
        return;
      }
      Vector x_next = y - s * g;
      y = x_next + coef * (x_next - x);
      x = std::move(x_next);
    }
    throw std::runtime_error("resolve_minimizer: modified NAG did not reach ||grad f|| <= 1e-12");
  });
  return f.with_minimizer(*cache.minimizer, cache.min_value);
}

}  // namespace hrde
