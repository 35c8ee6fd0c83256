#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrde/common.hpp"
#include "hrde/objective.hpp"

namespace hrde {

enum class Method { gd, heavy_ball, nag_classic, nag_modified, gc_modified, gc_phase, iv_phase };

std::string_view to_string(Method m);
/// Accepts the CLI identifiers ("gd", "heavy-ball", ..., "iv-phase").
Method parse_method(std::string_view id);
const std::vector<Method>& all_methods();

/// Members of the Nesterov family whose natural reference point is y_k.
bool is_nag_family(Method m);
/// Schemes sharing the gradient-correction phase-space variables.
bool is_gc_scheme(Method m);
/// Schemes sharing the implicit-velocity phase-space variables.
bool is_iv_scheme(Method m);

/// Per-iteration variables of one scheme.
///
/// Conventions per scheme (k is the iteration counter):
///   gd, heavy-ball : x = x_k; v = x_k - x_{k-1} (heavy-ball displacement).
///   nag-*, iv-phase: x = x_k, y = y_k, v = v_k = (x_k - x_{k-1}) / sqrt(s).
///   gc-*           : y = y_k, v = v_{k-1} = (y_k - y_{k-1}) / sqrt(s),
///                    x = x_k = y_{k-1} - s grad f(y_{k-1}) (x_0 = y_0),
///                    y_prev = y_{k-1}, grad_prev = grad f(y_{k-1}).
/// At k = 0 the gc schemes use the virtual predecessor y_{-1} = y_0, which
/// reproduces v_0 = -sqrt(s) grad f(x_0) / (1 + 2 sqrt(mu s)).
struct OptimizerState {
  Vector x;
  Vector y;
  Vector v;
  Vector y_prev;
  Vector grad_prev;
  std::size_t k = 0;
  double s = 0.0;
};

/// 1 / (1 + 2 sqrt(mu s)): momentum coefficient of the modified scheme.
double modified_momentum(double mu, double s);
/// (1 - sqrt(mu s)) / (1 + sqrt(mu s)).
double classic_momentum(double mu, double s);
/// ((1 - sqrt(mu s)) / (1 + sqrt(mu s)))^2, the default heavy-ball beta.
double default_heavy_ball_beta(double mu, double s);

/// Start state for `method` at x0: y_0 = x_0, zero velocity, and for the gc
/// schemes the virtual predecessor described on OptimizerState.
OptimizerState initial_state(const Objective& f, Method method, const Vector& x0, double s);

OptimizerState gd_step(const Objective& f, const OptimizerState& state);
OptimizerState heavy_ball_step(const Objective& f, const OptimizerState& state, double beta);
OptimizerState nag_classic_step(const Objective& f, const OptimizerState& state);
/// x_{k+1} = y_k - s grad f(y_k); y_{k+1} = x_{k+1} + (x_{k+1} - x_k) / (1 + 2 sqrt(mu s)).
OptimizerState nag_modified_step(const Objective& f, const OptimizerState& state);

struct GcStepResult {
  Vector y_next;
  Vector grad_curr;
};

/// Single-sequence gradient-correction recursion
///   y_{k+1} = y_k + [(y_k - y_{k-1}) - s grad f(y_k) - s (grad f(y_k) - grad f(y_{k-1}))] / (1 + 2 sqrt(mu s)).
/// `grad_prev` must be grad f(y_prev); the returned gradient is grad f(y_curr)
/// for reuse on the next call.
GcStepResult gc_modified_step(const Objective& f, const Vector& y_curr, const Vector& y_prev,
                              const Vector& grad_prev, double s, double mu);

/// State-level wrapper over gc_modified_step.
OptimizerState gc_modified_state_step(const Objective& f, const OptimizerState& state);

/// Phase-space form of the gradient-correction scheme. The implicit relation
/// for v_k is solved in closed form:
///   v_k = [v_{k-1} - sqrt(s) (2 grad f(y_k) - grad f(y_{k-1}))] / (1 + 2 sqrt(mu s)),
///   y_{k+1} = y_k + sqrt(s) v_k.
OptimizerState gc_phase_step(const Objective& f, const OptimizerState& state);

/// Phase-space form of the implicit-velocity scheme:
///   y_k = x_k + sqrt(s) v_k / (1 + 2 sqrt(mu s))
///   v_{k+1} = v_k - 2 sqrt(mu s) v_k / (1 + 2 sqrt(mu s)) - sqrt(s) grad f(y_k)
///   x_{k+1} = x_k + sqrt(s) v_{k+1}
/// The successor's y is y_{k+1}, the next probe point.
OptimizerState iv_phase_step(const Objective& f, const OptimizerState& state);

/// Choice of v_1 for the implicit-velocity schemes.
///   scheme  : whatever the recursion produces from v_0 = 0.
///   zero    : v_1 = 0 (x_1 = x_0).
///   gradient: v_1 = 2 sqrt(mu s) grad f(y_0).
enum class FirstVelocity { scheme, zero, gradient };

std::string_view to_string(FirstVelocity fv);
FirstVelocity parse_first_velocity(std::string_view id);

struct RunOptions {
  /// Heavy-ball momentum; default_heavy_ball_beta when unset.
  std::optional<double> beta;
  FirstVelocity first_velocity = FirstVelocity::scheme;
};

struct TrajectoryRecord {
  OptimizerState state;
  /// Gap at the method's natural reference point (y_k for the Nesterov
  /// family, x_k otherwise).
  double f_gap = 0.0;
  double fx_gap = 0.0;
  double fy_gap = 0.0;
  /// ||grad f|| at the natural reference point.
  double grad_norm = 0.0;
  std::optional<double> lyapunov;
  std::optional<double> bound;
};

enum class LyapunovForm { gc, iv };
enum class BoundTheorem { rate_gc, rate_iv, rate_iv_x, gd, classic };

struct Trajectory {
  Method method = Method::gd;
  std::string objective_id;
  double s = 0.0;
  double mu = 0.0;
  double lipschitz = 0.0;
  double f_x0_gap = 0.0;
  double dist0_sq = 0.0;
  FirstVelocity first_velocity = FirstVelocity::scheme;
  std::vector<TrajectoryRecord> records;
  std::optional<LyapunovForm> lyapunov_form;
  std::optional<BoundTheorem> bound_theorem;
  std::vector<std::string> warnings;
  /// Iteration at which a non-finite iterate appeared, if any.
  std::optional<std::size_t> aborted_at;
};

/// One step of `method` (heavy-ball uses options.beta). From k = 0 the
/// implicit-velocity schemes apply options.first_velocity to v_1.
OptimizerState step(const Objective& f, Method method, const OptimizerState& state,
                    const RunOptions& options = {});

/// Runs K steps from x0 and records per-iteration diagnostics. Objectives
/// without a known minimizer are resolved first via resolve_minimizer.
Trajectory run(const Objective& f, Method method, const Vector& x0, double s, std::size_t K,
               const RunOptions& options = {});

/// Returns `f` with x* and f* attached. Quadratics already carry them; other
/// objectives are solved with the modified NAG at s = 1/L until
/// ||grad f|| <= 1e-12. The result is cached on the objective.
Objective resolve_minimizer(const Objective& f);

}  // namespace hrde
