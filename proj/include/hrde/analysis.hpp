#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hrde/common.hpp"
#include "hrde/objective.hpp"
#include "hrde/optimizers.hpp"

namespace hrde {

// ---------------------------------------------------------------------------
// Characteristic equation of the modified gradient-correction scheme on a
// quadratic. Along an eigen-direction with eigenvalue lambda the recursion is
//   (1 + 2 sqrt(mu s)) y_{k+1} - 2 (1 + sqrt(mu s) - lambda s) y_k + (1 - lambda s) y_{k-1} = 0,
// whose discriminant equals 4 s (mu - lambda + lambda^2 s). The roots are
// therefore real exactly when s >= (lambda - mu) / lambda^2.
// ---------------------------------------------------------------------------

struct RootPair {
  double discriminant = 0.0;
  std::array<std::complex<double>, 2> roots;
  double modulus_max = 0.0;

  bool real() const { return discriminant >= 0.0; }
};

/// Coefficients (a, b, c) of a alpha^2 + b alpha + c for one eigenvalue.
std::array<double, 3> characteristic_coefficients(double lambda, double mu, double s);

RootPair characteristic_roots(double lambda, double mu, double s);

/// (lambda - mu) / lambda^2: the smallest step with real roots for lambda.
double real_root_threshold(double lambda, double mu);

/// Maximizer and maximum of real_root_threshold over lambda in [mu, lambda_hi],
/// by a uniform grid followed by golden-section refinement.
std::pair<double, double> max_real_root_threshold(double mu, double lambda_hi,
                                                  int grid_points = 1000);

/// [1/(4 mu), 1/L] when L <= 4 mu, otherwise nothing.
std::optional<std::pair<double, double>> monotonic_window(double mu, double L);

// ---------------------------------------------------------------------------
// Rate bounds.
// ---------------------------------------------------------------------------

std::string_view to_string(BoundTheorem theorem);
BoundTheorem parse_bound_theorem(std::string_view id);

/// Bound at k = 0..K:
///   rate-gc  : 2 (f0 + mu d0^2) / (1 + sqrt(mu s)/4)^k
///   rate-iv  : 4 L d0^2 / (1 + sqrt(mu s)/4)^k
///   rate-iv-x: (2 f0 + mu d0^2) / (1 + sqrt(mu/L)/4)^k
///   gd       : f0 (1 - mu s)^k
///   classic  : (f0 + mu d0^2 / 2) (1 - sqrt(mu s))^k
/// where f0 = f(x0) - f* and d0^2 = ||x0 - x*||^2.
std::vector<double> bound_curve(BoundTheorem theorem, double f_x0_gap, double dist0_sq, double mu,
                                double L, double s, std::size_t K);

inline constexpr double kBoundSlack = 1e-10;

struct BoundReport {
  CertReport cert;
  std::vector<double> bound;
  /// Whether the theorem's hypotheses hold for this run (scheme and step).
  bool guaranteed = false;
  /// Which gap was compared: "f(y_k)", "f(x_k)" or the natural gap.
  std::string_view quantity;
};

/// Compares the trajectory's gaps with bound_curve at slack
/// 1e-10 max(1, bound(0)). rate-gc pairs with the gc schemes, rate-iv and
/// rate-iv-x with nag-modified / iv-phase; the unaccelerated baselines may be
/// checked against any theorem for comparison. Other pairings throw.
BoundReport check_bound(const Trajectory& traj, BoundTheorem theorem);

/// Whether check_bound accepts the pairing.
bool bound_applies(Method method, BoundTheorem theorem);

/// Stores the bound curve on the records.
void attach_bound(Trajectory& traj, BoundTheorem theorem);

/// Gap the theorem speaks about, for record k.
double bound_quantity(const Trajectory& traj, BoundTheorem theorem, std::size_t k);

/// Fitted per-iteration factor r with f_gap(k) ~ C r^k, by least squares on
/// log f_gap over the last `tail_fraction` of the records preceding the first
/// gap <= 1e-14. Empty when fewer than 10 records are usable.
std::optional<double> empirical_rate(const Trajectory& traj, double tail_fraction);

/// First k with f_gap(k) <= target * f_gap(0), if any.
std::optional<std::size_t> iterations_to_relative_gap(const Trajectory& traj, double target);

inline constexpr double kGradientStepSlack = 1e-12;

/// f(x_{k+1}) - f* <= f(y_k) - f* - (s/2) ||grad f(y_k)||^2 + 1e-12 max(1, f(y_k) - f*)
/// for consecutive records of a Nesterov-family trajectory. Throws for
/// gd and heavy-ball.
CertReport certify_gradient_step(const Trajectory& traj, const Objective& f);

// ---------------------------------------------------------------------------
// Monotonicity scan.
// ---------------------------------------------------------------------------

struct MonotonicityRow {
  double s = 0.0;
  double lambda = 0.0;
  RootPair roots;
  bool predicted_monotone = false;
  /// |y^(i)_k| nonincreasing for this eigen-component.
  bool observed_monotone = false;
};

struct MonotonicityStep {
  double s = 0.0;
  /// Every eigenvalue has real roots.
  bool predicted_monotone = false;
  /// f(y_k) nonincreasing over the run.
  bool observed_monotone = false;
  std::optional<std::size_t> first_increase;
  bool agree() const { return predicted_monotone == observed_monotone; }
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  std::vector<MonotonicityStep> steps;
  bool all_agree() const;
};

struct ScanOptions {
  std::uint64_t seed = 1;
  /// Explicit start; a seeded point in the unit ball otherwise.
  std::optional<Vector> x0;
};

inline constexpr double kMonotoneTolerance = 1e-12;

/// True when no entry exceeds its predecessor by more than `tolerance`;
/// `first_increase` receives the first offending index.
bool is_nonincreasing(const std::vector<double>& values, double tolerance,
                      std::optional<std::size_t>* first_increase = nullptr);

/// Tolerance used by the scan: 1e-12 max(1, values[0]).
double monotone_tolerance(const std::vector<double>& values);

/// Runs gc-phase on the diagonal quadratic with `spectrum` (declared modulus
/// `mu`) for every step size in `s_grid` and compares root reality with the
/// observed monotonicity of f(y_k) and of each eigen-component.
MonotonicityReport monotonicity_scan(double mu, const SpectrumSpec& spectrum,
                                     const std::vector<double>& s_grid, std::size_t K,
                                     const ScanOptions& options = {});

}  // namespace hrde
