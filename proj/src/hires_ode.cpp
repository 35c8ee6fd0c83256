#include "hrde/hires_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace hrde {

namespace {

Vector probe_point(const OdeState& state, double s, double mu) {
  const double c = 1.0 + 2.0 * std::sqrt(mu * s);
  return state.X + (std::sqrt(s) / c) * state.Xdot;
}

void require_dim(const Objective& f, const OdeState& state) {
  if (state.X.size() != f.dim() || state.Xdot.size() != f.dim())
    throw std::invalid_argument("ode state dimension does not match objective");
}

}  // namespace

std::string_view to_string(OdeForm form) {
  return form == OdeForm::simplified ? "simplified" : "original";
}

OdeForm parse_ode_form(std::string_view id) {
  if (id == "simplified") return OdeForm::simplified;
  if (id == "original") return OdeForm::original;
  throw std::invalid_argument("unknown ode form '" + std::string(id) + "'");
}

OdeDerivative rhs_simplified(const Objective& f, const OdeState& state, double s, double mu) {
  require_dim(f, state);
  OdeDerivative d;
  d.dX = state.Xdot;
  d.dXdot = -2.0 * std::sqrt(mu) * state.Xdot - f.gradient(probe_point(state, s, mu));
  return d;
}

OdeDerivative rhs_original(const Objective& f, const OdeState& state, double s, double mu) {
  require_dim(f, state);
  const double root_mu_s = std::sqrt(mu * s);
  OdeDerivative d;
  d.dX = state.Xdot;
  d.dXdot = (-2.0 * std::sqrt(mu) * state.Xdot -
             (1.0 + 2.0 * root_mu_s) * f.gradient(probe_point(state, s, mu))) /
            (1.0 + root_mu_s);
  return d;
}

double default_ode_step(double s) { return std::min(1e-3, std::sqrt(s) / 10.0); }

std::vector<OdeState> integrate(const Objective& f, const Vector& x0, double s, double T, double h,
                                OdeForm which) {
  if (!(h > 0.0)) throw std::invalid_argument("integrate: step h must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("integrate: horizon T must be nonnegative");
  if (x0.size() != f.dim()) throw std::invalid_argument("integrate: x0 dimension mismatch");
  const double mu = f.mu();
  auto rhs = [&](const OdeState& st) {
    return which == OdeForm::simplified ? rhs_simplified(f, st, s, mu) : rhs_original(f, st, s, mu);
  };

  // Guard against T/h landing a hair above an integer through rounding.
  const auto n_steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  std::vector<OdeState> out;
  out.reserve(n_steps + 1);
  out.push_back(OdeState{0.0, x0, Vector::Zero(f.dim())});

  for (std::size_t i = 0; i < n_steps; ++i) {
    const OdeState& cur = out.back();
    const double t_next = i + 1 == n_steps ? T : static_cast<double>(i + 1) * h;
    const double dt = t_next - cur.t;

    const OdeDerivative k1 = rhs(cur);
    const OdeDerivative k2 =
        rhs(OdeState{cur.t + 0.5 * dt, cur.X + 0.5 * dt * k1.dX, cur.Xdot + 0.5 * dt * k1.dXdot});
    const OdeDerivative k3 =
        rhs(OdeState{cur.t + 0.5 * dt, cur.X + 0.5 * dt * k2.dX, cur.Xdot + 0.5 * dt * k2.dXdot});
    const OdeDerivative k4 = rhs(OdeState{t_next, cur.X + dt * k3.dX, cur.Xdot + dt * k3.dXdot});

    OdeState next;
    next.t = t_next;
    next.X = cur.X + (dt / 6.0) * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX);
    next.Xdot = cur.Xdot + (dt / 6.0) * (k1.dXdot + 2.0 * k2.dXdot + 2.0 * k3.dXdot + k4.dXdot);
    if (!next.X.allFinite() || !next.Xdot.allFinite()) {
      std::ostringstream msg;
      msg << "integrate: non-finite state at t=" << t_next;
      throw NonFiniteStateError(t_next, msg.str());
    }
    out.push_back(std::move(next));
  }
  return out;
}

ContinuousReport check_continuous_bound(const std::vector<OdeState>& solution,
                                        const Objective& objective, double s, double mu,
                                        std::optional<double> rate, double bound_tol,
                                        double decay_tol) {
  const Objective f = resolve_minimizer(objective);
  ContinuousReport report;
  report.bound.name = "continuous_bound";
  report.decay.name = "lyapunov_decay";
  if (solution.empty()) return report;

  const double decay_rate = rate.value_or(std::sqrt(mu) / 4.0);
  const Vector& x0 = solution.front().X;
  const double numerator = 0.5 * (f.gap(x0) + mu * f.dist_sq(x0));
  const double c = 1.0 + 2.0 * std::sqrt(mu * s);

  report.lyapunov.reserve(solution.size());
  for (std::size_t i = 0; i < solution.size(); ++i) {
    const OdeState& st = solution[i];
    const double lhs = f.gap(st.X + (std::sqrt(s) / c) * st.Xdot);
    const double rhs = numerator * std::exp(-decay_rate * st.t);
    report.bound.record(i, rhs + bound_tol - lhs);

    LyapunovRecord e = lyap_ode(f, st.X, st.Xdot, s, mu);
    e.k_or_t = st.t;
    if (i > 0) {
      const LyapunovRecord& prev = report.lyapunov.back();
      const double factor = std::exp(-decay_rate * (st.t - prev.k_or_t));
      const double margin = prev.energy > 0.0 ? factor + decay_tol - e.energy / prev.energy
                                              : decay_tol - e.energy;
      e.contraction_ok = margin >= 0.0;
      report.decay.record(i - 1, margin);
      if (prev.energy > 0.0) report.max_ratio = std::max(report.max_ratio, e.energy / prev.energy);
    }
    report.lyapunov.push_back(e);
  }
  return report;
}

}  // namespace hrde
