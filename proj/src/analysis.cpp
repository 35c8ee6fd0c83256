#include "hrde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hrde/rng.hpp"

namespace hrde {

std::array<double, 3> characteristic_coefficients(double lambda, double mu, double s) {
  const double r = std::sqrt(mu * s);
  return {1.0 + 2.0 * r, -2.0 * (1.0 + r - lambda * s), 1.0 - lambda * s};
}

RootPair characteristic_roots(double lambda, double mu, double s) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(s > 0.0))
    throw std::invalid_argument("characteristic_roots: inputs must be positive");
  const auto [a, b, c] = characteristic_coefficients(lambda, mu, s);
  RootPair out;
  // b^2 - 4ac, expanded and simplified to avoid cancellation near the boundary.
  out.discriminant = 4.0 * s * (mu - lambda + lambda * lambda * s);
  if (out.discriminant >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(out.discriminant), b));
    const double r1 = q / a;
    const double r2 = q != 0.0 ? c / q : 0.0;
    out.roots = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
  } else {
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-out.discriminant) / (2.0 * a);
    out.roots = {std::complex<double>(re, im), std::complex<double>(re, -im)};
  }
  out.modulus_max = std::max(std::abs(out.roots[0]), std::abs(out.roots[1]));
  return out;
}

double real_root_threshold(double lambda, double mu) { return (lambda - mu) / (lambda * lambda); }

std::pair<double, double> max_real_root_threshold(double mu, double lambda_hi, int grid_points) {
  if (!(mu > 0.0) || !(lambda_hi >= mu) || grid_points < 3)
    throw std::invalid_argument("max_real_root_threshold: need 0 < mu <= lambda_hi, >= 3 points");
  const double step = (lambda_hi - mu) / (grid_points - 1);
  int best = 0;
  double best_value = real_root_threshold(mu, mu);
  for (int i = 1; i < grid_points; ++i) {
    const double v = real_root_threshold(mu + step * i, mu);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = mu + step * std::max(0, best - 1);
  double hi = mu + step * std::min(grid_points - 1, best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = real_root_threshold(x1, mu);
  double f2 = real_root_threshold(x2, mu);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = real_root_threshold(x2, mu);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = real_root_threshold(x1, mu);
    }
  }
  const double arg = 0.5 * (lo + hi);
  return {arg, std::max(best_value, real_root_threshold(arg, mu))};
}

std::optional<std::pair<double, double>> monotonic_window(double mu, double L) {
  if (!(mu > 0.0) || !(L >= mu)) throw std::invalid_argument("monotonic_window: need L >= mu > 0");
  if (L > 4.0 * mu) return std::nullopt;
  return std::make_pair(1.0 / (4.0 * mu), 1.0 / L);
}

std::string_view to_string(BoundTheorem theorem) {
  switch (theorem) {
    case BoundTheorem::rate_gc: return "rate-gc";
    case BoundTheorem::rate_iv: return "rate-iv";
    case BoundTheorem::rate_iv_x: return "rate-iv-x";
    case BoundTheorem::gd: return "gd";
    case BoundTheorem::classic: return "classic";
  }
  return "unknown";
}

BoundTheorem parse_bound_theorem(std::string_view id) {
  if (id == "rate-gc") return BoundTheorem::rate_gc;
  if (id == "rate-iv") return BoundTheorem::rate_iv;
  if (id == "rate-iv-x") return BoundTheorem::rate_iv_x;
  if (id == "gd") return BoundTheorem::gd;
  if (id == "classic") return BoundTheorem::classic;
  throw std::invalid_argument("unknown bound theorem '" + std::string(id) + "'");
}

std::vector<double> bound_curve(BoundTheorem theorem, double f_x0_gap, double dist0_sq, double mu,
                                double L, double s, std::size_t K) {
  if (f_x0_gap < 0.0 || dist0_sq < 0.0 || !(mu > 0.0) || !(L > 0.0) || !(s > 0.0))
    throw std::invalid_argument("bound_curve: inputs must be nonnegative (mu, L, s positive)");
  double numerator = 0.0;
  double factor = 1.0;  // bound(k) = numerator * factor^k
  switch (theorem) {
    case BoundTheorem::rate_gc:
      numerator = 2.0 * (f_x0_gap + mu * dist0_sq);
      factor = 1.0 / (1.0 + std::sqrt(mu * s) / 4.0);
      break;
    case BoundTheorem::rate_iv:
      numerator = 4.0 * L * dist0_sq;
      factor = 1.0 / (1.0 + std::sqrt(mu * s) / 4.0);
      break;
    case BoundTheorem::rate_iv_x:
      numerator = 2.0 * f_x0_gap + mu * dist0_sq;
      factor = 1.0 / (1.0 + std::sqrt(mu / L) / 4.0);
      break;
    case BoundTheorem::gd:
      numerator = f_x0_gap;
      factor = 1.0 - mu * s;
      break;
    case BoundTheorem::classic:
      numerator = f_x0_gap + 0.5 * mu * dist0_sq;
      factor = 1.0 - std::sqrt(mu * s);
      break;
  }
  std::vector<double> out(K + 1);
  for (std::size_t k = 0; k <= K; ++k)
    out[k] = numerator * std::pow(factor, static_cast<double>(k));
  return out;
}

namespace {

bool is_baseline(Method m) {
  return m == Method::gd || m == Method::heavy_ball || m == Method::nag_classic;
}

void check_pairing(Method method, BoundTheorem theorem) {
  if (!bound_applies(method, theorem))
    throw std::invalid_argument("bound '" + std::string(to_string(theorem)) +
                                "' does not apply to method '" + std::string(to_string(method)) +
                                "'");
}

}  // namespace

bool bound_applies(Method method, BoundTheorem theorem) {
  switch (theorem) {
    case BoundTheorem::rate_gc: return is_gc_scheme(method) || is_baseline(method);
    case BoundTheorem::rate_iv:
    case BoundTheorem::rate_iv_x: return is_iv_scheme(method) || is_baseline(method);
    case BoundTheorem::gd:
    case BoundTheorem::classic: return true;
  }
  return false;
}

namespace {

bool hypotheses_hold(const Trajectory& traj, BoundTheorem theorem) {
  const bool step_ok = traj.s * traj.lipschitz <= 1.0 + 1e-12;
  switch (theorem) {
    case BoundTheorem::rate_gc: return step_ok && is_gc_scheme(traj.method);
    case BoundTheorem::rate_iv: return step_ok && is_iv_scheme(traj.method);
    case BoundTheorem::rate_iv_x:
      return is_iv_scheme(traj.method) && std::abs(traj.s * traj.lipschitz - 1.0) <= 1e-12;
    case BoundTheorem::gd: return step_ok && traj.method == Method::gd;
    case BoundTheorem::classic: return step_ok && traj.method == Method::nag_classic;
  }
  return false;
}

}  // namespace

double bound_quantity(const Trajectory& traj, BoundTheorem theorem, std::size_t k) {
  const TrajectoryRecord& rec = traj.records.at(k);
  if (is_baseline(traj.method)) return rec.f_gap;
  switch (theorem) {
    case BoundTheorem::rate_iv: return rec.fy_gap;
    case BoundTheorem::rate_gc:
    case BoundTheorem::rate_iv_x: return rec.fx_gap;
    default: return rec.f_gap;
  }
}

BoundReport check_bound(const Trajectory& traj, BoundTheorem theorem) {
  check_pairing(traj.method, theorem);
  BoundReport report;
  report.cert.name = std::string(to_string(theorem));
  report.guaranteed = hypotheses_hold(traj, theorem);
  if (is_baseline(traj.method))
    report.quantity = "natural";
  else
    report.quantity = theorem == BoundTheorem::rate_iv ? "f(y_k)"
                      : (theorem == BoundTheorem::rate_gc || theorem == BoundTheorem::rate_iv_x)
                          ? "f(x_k)"
                          : "natural";
  if (traj.records.empty()) return report;

  report.bound = bound_curve(theorem, traj.f_x0_gap, traj.dist0_sq, traj.mu, traj.lipschitz,
                             traj.s, traj.records.size() - 1);
  const double slack = kBoundSlack * std::max(1.0, report.bound.front());
  for (std::size_t k = 0; k < traj.records.size(); ++k)
    report.cert.record(k, report.bound[k] + slack - bound_quantity(traj, theorem, k));
  return report;
}

void attach_bound(Trajectory& traj, BoundTheorem theorem) {
  check_pairing(traj.method, theorem);
  if (traj.records.empty()) return;
  const auto curve = bound_curve(theorem, traj.f_x0_gap, traj.dist0_sq, traj.mu, traj.lipschitz,
                                 traj.s, traj.records.size() - 1);
  for (std::size_t k = 0; k < curve.size(); ++k) traj.records[k].bound = curve[k];
  traj.bound_theorem = theorem;
}

std::optional<double> empirical_rate(const Trajectory& traj, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("empirical_rate: tail_fraction must be in (0, 1]");
  constexpr double kFloor = 1e-14;
  constexpr std::size_t kMinRecords = 10;

  std::size_t usable = 0;
  while (usable < traj.records.size() && traj.records[usable].f_gap > kFloor) ++usable;
  const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(usable)));
  if (tail < kMinRecords) return std::nullopt;

  // Least squares of log(gap) against k over records [usable - tail, usable).
  double sum_k = 0.0, sum_y = 0.0, sum_kk = 0.0, sum_ky = 0.0;
  const std::size_t first = usable - tail;
  for (std::size_t i = first; i < usable; ++i) {
    const double k = static_cast<double>(i - first);
    const double y = std::log(traj.records[i].f_gap);
    sum_k += k;
    sum_y += y;
    sum_kk += k * k;
    sum_ky += k * y;
  }
  const double n = static_cast<double>(tail);
  const double slope = (n * sum_ky - sum_k * sum_y) / (n * sum_kk - sum_k * sum_k);
  return std::exp(slope);
}

std::optional<std::size_t> iterations_to_relative_gap(const Trajectory& traj, double target) {
  if (traj.records.empty()) return std::nullopt;
  const double threshold = target * traj.records.front().f_gap;
  for (std::size_t k = 0; k < traj.records.size(); ++k)
    if (traj.records[k].f_gap <= threshold) return k;
  return std::nullopt;
}

bool MonotonicityReport::all_agree() const {
  return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.agree(); });
}

CertReport certify_gradient_step(const Trajectory& traj, const Objective& f) {
  if (!is_nag_family(traj.method))
    throw std::invalid_argument("gradient-step inequality needs a Nesterov-family method, got '" +
                                std::string(to_string(traj.method)) + "'");
  CertReport rep;
  rep.name = "gradient-step";
  for (std::size_t k = 0; k + 1 < traj.records.size(); ++k) {
    const Vector& y = traj.records[k].state.y;
    const Vector& x_next = traj.records[k + 1].state.x;
    const double gy = f.gap(y);
    const double rhs = gy - 0.5 * traj.s * f.gradient(y).squaredNorm() +
                       kGradientStepSlack * std::max(1.0, gy);
    rep.record(k, rhs - f.gap(x_next));
  }
  return rep;
}

bool is_nonincreasing(const std::vector<double>& values, double tolerance,
                      std::optional<std::size_t>* first_increase) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + tolerance) {
      if (first_increase) *first_increase = i;
      return false;
    }
  }
  return true;
}

double monotone_tolerance(const std::vector<double>& values) {
  return kMonotoneTolerance * std::max(1.0, values.empty() ? 0.0 : values.front());
}

MonotonicityReport monotonicity_scan(double mu, const SpectrumSpec& spectrum,
                                     const std::vector<double>& s_grid, std::size_t K,
                                     const ScanOptions& options) {
  Objective f = make_quadratic(spectrum);
  if (mu != f.mu()) f = f.with_declared_constants(mu, f.lipschitz());
  Vector x0;
  if (options.x0) {
    x0 = *options.x0;
  } else {
    Rng rng(options.seed);
    x0 = rng.in_ball(Vector::Zero(f.dim()), 1.0);
  }

  MonotonicityReport report;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw std::invalid_argument("monotonicity_scan: step sizes must be positive");
    const Trajectory traj = run(f, Method::gc_phase, x0, s, K);

    MonotonicityStep summary;
    summary.s = s;
    summary.predicted_monotone = true;

    std::vector<double> total(traj.records.size());
    for (std::size_t k = 0; k < traj.records.size(); ++k) total[k] = traj.records[k].fy_gap;
    summary.observed_monotone =
        is_nonincreasing(total, monotone_tolerance(total), &summary.first_increase);

    for (int i = 0; i < spectrum.dim(); ++i) {
      const double lambda = spectrum.eigenvalues()[i];
      MonotonicityRow row;
      row.s = s;
      row.lambda = lambda;
      row.roots = characteristic_roots(lambda, mu, s);
      row.predicted_monotone = row.roots.real();
      std::vector<double> component(traj.records.size());
      for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const double yi = traj.records[k].state.y[i];
        component[k] = 0.5 * lambda * yi * yi;
      }
      row.observed_monotone = is_nonincreasing(component, monotone_tolerance(component));
      summary.predicted_monotone = summary.predicted_monotone && row.predicted_monotone;
      report.rows.push_back(row);
    }
    report.steps.push_back(summary);
  }
  return report;
}

}  // namespace hrde
