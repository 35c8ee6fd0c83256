#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hrde/analysis.hpp"
#include "hrde/hires_ode.hpp"
#include "hrde/optimizers.hpp"

namespace hrde::csv {

/// Shortest decimal that round-trips to the same double; '.' separator.
std::string format_double(double value);

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string quote(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Header "k,f_gap,grad_norm[,lyapunov][,bound]"; optional columns appear
/// when the trajectory carries them.
void write_trajectory(std::ostream& out, const Trajectory& traj);

/// Header "t,X_0..X_{d-1},Xdot_0..Xdot_{d-1},f_gap,lyapunov".
void write_ode_solution(std::ostream& out, const std::vector<OdeState>& solution,
                        const Objective& f, double s, double mu);

/// Header "s,lambda,discriminant,root1_re,root1_im,root2_re,root2_im,
/// predicted_monotone,observed_monotone".
void write_monotonicity(std::ostream& out, const MonotonicityReport& report);

}  // namespace hrde::csv
