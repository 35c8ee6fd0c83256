#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hrde/common.hpp"
#include "hrde/lyapunov.hpp"
#include "hrde/objective.hpp"

namespace hrde {

/// Point on a solution of the implicit-velocity ODE.
struct OdeState {
  double t = 0.0;
  Vector X;
  Vector Xdot;
};

struct OdeDerivative {
  Vector dX;
  Vector dXdot;
};

/// `simplified` keeps only the implicit velocity:
///   X'' + 2 sqrt(mu) X' + grad f(X + sqrt(s) X' / (1 + 2 sqrt(mu s))) = 0.
/// `original` keeps the O(sqrt(s)) coefficients:
///   (1 + sqrt(mu s)) X'' + 2 sqrt(mu) X' + (1 + 2 sqrt(mu s)) grad f(probe) = 0.
enum class OdeForm { simplified, original };

std::string_view to_string(OdeForm form);
OdeForm parse_ode_form(std::string_view id);

class NonFiniteStateError : public std::runtime_error {
 public:
  NonFiniteStateError(double t, const std::string& what) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

OdeDerivative rhs_simplified(const Objective& f, const OdeState& state, double s, double mu);
OdeDerivative rhs_original(const Objective& f, const OdeState& state, double s, double mu);

/// min(1e-3, sqrt(s) / 10).
double default_ode_step(double s);

/// Classical RK4 with fixed step h from X(0) = x0, X'(0) = 0, using mu of
/// `f`. Returns states at t = 0, h, 2h, ..., T; the last step is shortened
/// to land on T exactly when T is not a multiple of h.
std::vector<OdeState> integrate(const Objective& f, const Vector& x0, double s, double T, double h,
                                OdeForm which = OdeForm::simplified);

struct ContinuousReport {
  /// f(probe(t)) - f* <= (f(x0) - f* + mu ||x0 - x*||^2) / 2 * exp(-rate t).
  CertReport bound;
  /// E(t + h) / E(t) <= exp(-rate h) + tol (per consecutive pair).
  CertReport decay;
  std::vector<LyapunovRecord> lyapunov;
  /// Largest observed E(t + h) / E(t).
  double max_ratio = 0.0;
};

inline constexpr double kContinuousBoundTolerance = 1e-6;
inline constexpr double kContinuousDecayTolerance = 1e-8;

/// Checks the continuous convergence bound and the discrete-time decay of
/// lyap_ode along `solution` (from integrate with the simplified form).
/// `rate` defaults to sqrt(mu) / 4.
ContinuousReport check_continuous_bound(const std::vector<OdeState>& solution, const Objective& f,
                                        double s, double mu,
                                        std::optional<double> rate = std::nullopt,
                                        double bound_tol = kContinuousBoundTolerance,
                                        double decay_tol = kContinuousDecayTolerance);

}  // namespace hrde
