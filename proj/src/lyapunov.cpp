#include "hrde/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hrde {

namespace {

void require_minimizer(const Objective& f) {
  if (!f.has_minimizer())
    throw std::logic_error("lyapunov: minimizer of '" + f.id() + "' is unknown");
}

void check_weights(const EnergyWeights& w) {
  if (!(w.kinetic > 0.0) || !(w.mixed > 0.0) || std::abs(w.kinetic + w.mixed - 1.0) > 1e-12)
    throw std::invalid_argument("lyapunov: energy weights must be positive and sum to 1");
}

void check_form(Method method, LyapunovForm form) {
  const bool ok = form == LyapunovForm::gc ? is_gc_scheme(method) : is_iv_scheme(method);
  if (!ok)
    throw std::invalid_argument("lyapunov form '" + std::string(to_string(form)) +
                                "' is incompatible with method '" +
                                std::string(to_string(method)) + "'");
}

LyapunovRecord finish(LyapunovRecord r) {
  r.energy = r.potential + r.kinetic + r.mixed + r.additional;
  return r;
}

}  // namespace

std::string_view to_string(LyapunovForm form) {
  return form == LyapunovForm::gc ? "gc" : "iv";
}

LyapunovForm parse_lyapunov_form(std::string_view id) {
  if (id == "gc") return LyapunovForm::gc;
  if (id == "iv") return LyapunovForm::iv;
  throw std::invalid_argument("unknown lyapunov form '" + std::string(id) + "'");
}

LyapunovRecord lyap_gc(const Objective& f, const Vector& y_k, const Vector& y_next,
                       const Vector& v_k, double s, double mu, const EnergyWeights& w) {
  require_minimizer(f);
  check_weights(w);
  const Vector& x_star = *f.minimizer();
  const Vector grad = f.gradient(y_k);
  LyapunovRecord r;
  r.potential = f.gap(y_k);
  r.kinetic = 0.5 * w.kinetic * v_k.squaredNorm();
  r.mixed = 0.5 * w.mixed *
            (v_k + 2.0 * std::sqrt(mu) * (y_next - x_star) + std::sqrt(s) * grad).squaredNorm();
  r.additional = -0.5 * s * grad.squaredNorm();
  return finish(r);
}

LyapunovRecord lyap_iv(const Objective& f, const Vector& y_k, const Vector& v_next,
                       const Vector& x_next, double s, double mu, const EnergyWeights& w) {
  require_minimizer(f);
  check_weights(w);
  const double c = 1.0 + 2.0 * std::sqrt(mu * s);
  LyapunovRecord r;
  r.potential = f.gap(y_k);
  r.kinetic = 0.5 * w.kinetic * v_next.squaredNorm() / (c * c);
  r.mixed = 0.5 * w.mixed * (v_next + 2.0 * std::sqrt(mu) * (x_next - *f.minimizer())).squaredNorm();
  return finish(r);
}

LyapunovRecord lyap_ode(const Objective& f, const Vector& X, const Vector& Xdot, double s,
                        double mu, const EnergyWeights& w) {
  require_minimizer(f);
  check_weights(w);
  const double c = 1.0 + 2.0 * std::sqrt(mu * s);
  LyapunovRecord r;
  r.potential = f.gap(X + (std::sqrt(s) / c) * Xdot);
  r.kinetic = 0.5 * w.kinetic * Xdot.squaredNorm() / (c * c);
  r.mixed = 0.5 * w.mixed * (Xdot + 2.0 * std::sqrt(mu) * (X - *f.minimizer())).squaredNorm();
  return finish(r);
}

double initial_energy_iv(const Objective& objective, const Vector& x0, double s, FirstVelocity fv) {
  const Objective f = resolve_minimizer(objective);
  RunOptions options;
  options.first_velocity = fv;
  const OptimizerState start = initial_state(f, Method::iv_phase, x0, s);
  const OptimizerState first = step(f, Method::iv_phase, start, options);
  return lyap_iv(f, x0, first.v, first.x, s, f.mu()).energy;
}

std::vector<LyapunovRecord> lyapunov_series(const Trajectory& traj, const Objective& objective,
                                            LyapunovForm form, const EnergyWeights& w) {
  check_form(traj.method, form);
  const Objective f = resolve_minimizer(objective);
  const auto& recs = traj.records;
  std::vector<LyapunovRecord> out;
  out.reserve(recs.size());
  if (recs.empty()) return out;

  RunOptions options;
  options.first_velocity = traj.first_velocity;
  const OptimizerState lookahead = step(f, traj.method, recs.back().state, options);

  for (std::size_t k = 0; k < recs.size(); ++k) {
    const OptimizerState& cur = recs[k].state;
    const OptimizerState& next = k + 1 < recs.size() ? recs[k + 1].state : lookahead;
    LyapunovRecord r = form == LyapunovForm::gc
                           ? lyap_gc(f, cur.y, next.y, next.v, traj.s, f.mu(), w)
                           : lyap_iv(f, cur.y, next.v, next.x, traj.s, f.mu(), w);
    r.k_or_t = static_cast<double>(cur.k);
    out.push_back(r);
  }
  return out;
}

void attach_lyapunov(Trajectory& traj, const Objective& f, LyapunovForm form,
                     const EnergyWeights& w) {
  const auto series = lyapunov_series(traj, f, form, w);
  for (std::size_t k = 0; k < series.size(); ++k) traj.records[k].lyapunov = series[k].energy;
  traj.lyapunov_form = form;
}

ContractionReport certify_contraction(const Trajectory& traj, LyapunovForm form,
                                      std::optional<double> rho) {
  check_form(traj.method, form);
  if (traj.lyapunov_form != form)
    throw std::invalid_argument("certify_contraction: trajectory carries no energies of form '" +
                                std::string(to_string(form)) + "'");
  ContractionReport report;
  report.cert.name = "contraction";
  report.rho = rho.value_or(std::sqrt(traj.mu * traj.s) / 4.0);
  const auto& recs = traj.records;
  if (recs.empty()) return report;

  const double slack = kContractionSlack * std::max(1.0, *recs.front().lyapunov);
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const double e_k = *recs[k].lyapunov;
    const double e_next = *recs[k + 1].lyapunov;
    report.cert.record(k, e_k / (1.0 + report.rho) + slack - e_next);
    if (e_k > slack) report.max_ratio = std::max(report.max_ratio, e_next / e_k);
  }
  return report;
}

}  // namespace hrde
