#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hrde/common.hpp"
#include "hrde/objective.hpp"
#include "hrde/optimizers.hpp"

namespace hrde {

std::string_view to_string(LyapunovForm form);
LyapunovForm parse_lyapunov_form(std::string_view id);

/// Split of kinetic vs mixed energy. Default is alpha = beta = 1/2; any
/// positive pair with alpha + beta = 1 is accepted.
struct EnergyWeights {
  double kinetic = 0.5;
  double mixed = 0.5;
};

struct LyapunovRecord {
  double k_or_t = 0.0;
  double energy = 0.0;
  double potential = 0.0;
  double kinetic = 0.0;
  double mixed = 0.0;
  /// Gradient-norm correction; zero for the implicit-velocity forms.
  double additional = 0.0;
  bool contraction_ok = true;
};

/// Gradient-correction energy
///   E(k) = f(y_k) - f* + 1/4 ||v_k||^2
///        + 1/4 ||v_k + 2 sqrt(mu) (y_{k+1} - x*) + sqrt(s) grad f(y_k)||^2
///        - (s/2) ||grad f(y_k)||^2.
LyapunovRecord lyap_gc(const Objective& f, const Vector& y_k, const Vector& y_next,
                       const Vector& v_k, double s, double mu, const EnergyWeights& w = {});

/// Implicit-velocity energy
///   E(k) = f(y_k) - f* + ||v_{k+1}||^2 / (4 (1 + 2 sqrt(mu s))^2)
///        + ||v_{k+1} + 2 sqrt(mu) (x_{k+1} - x*)||^2 / 4.
LyapunovRecord lyap_iv(const Objective& f, const Vector& y_k, const Vector& v_next,
                       const Vector& x_next, double s, double mu, const EnergyWeights& w = {});

/// Continuous energy for the implicit-velocity ODE, evaluated at the probe
/// point X + sqrt(s) Xdot / (1 + 2 sqrt(mu s)).
LyapunovRecord lyap_ode(const Objective& f, const Vector& X, const Vector& Xdot, double s,
                        double mu, const EnergyWeights& w = {});

/// E(0) of the implicit-velocity energy at x0 under a given v_1 convention.
double initial_energy_iv(const Objective& f, const Vector& x0, double s, FirstVelocity fv);

/// Energy of every record of `traj`. E(k) needs the successor state, so the
/// last record is completed with one extra (diagnostic) step. Throws when the
/// form does not match the trajectory's scheme.
std::vector<LyapunovRecord> lyapunov_series(const Trajectory& traj, const Objective& f,
                                            LyapunovForm form, const EnergyWeights& w = {});

/// Stores lyapunov_series(...) energies on the records.
void attach_lyapunov(Trajectory& traj, const Objective& f, LyapunovForm form,
                     const EnergyWeights& w = {});

inline constexpr double kContractionSlack = 1e-10;

struct ContractionReport {
  CertReport cert;
  double rho = 0.0;
  /// Largest observed E(k+1) / E(k) over records with E(k) above the slack.
  double max_ratio = 0.0;
};

/// Checks E(k+1) <= E(k) / (1 + rho) + 1e-10 max(1, E(0)) for consecutive
/// records; rho defaults to sqrt(mu s) / 4. The trajectory must carry
/// energies of `form` (see attach_lyapunov).
ContractionReport certify_contraction(const Trajectory& traj, LyapunovForm form,
                                      std::optional<double> rho = std::nullopt);

}  // namespace hrde
