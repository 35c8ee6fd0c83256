#include "hrde/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hrde/lyapunov.hpp"

namespace hrde::csv {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) throw std::runtime_error("csv: failed to format double");
  return std::string(buf, result.ptr);
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const bool lyap = traj.lyapunov_form.has_value();
  const bool bound = traj.bound_theorem.has_value();
  std::vector<std::string> header{"k", "f_gap", "grad_norm"};
  if (lyap) header.emplace_back("lyapunov");
  if (bound) header.emplace_back("bound");
  write_row(out, header);
  for (const auto& rec : traj.records) {
    std::vector<std::string> row{std::to_string(rec.state.k), format_double(rec.f_gap),
                                 format_double(rec.grad_norm)};
    if (lyap) row.push_back(format_double(rec.lyapunov.value_or(std::nan(""))));
    if (bound) row.push_back(format_double(rec.bound.value_or(std::nan(""))));
    write_row(out, row);
  }
}

void write_ode_solution(std::ostream& out, const std::vector<OdeState>& solution,
                        const Objective& objective, double s, double mu) {
  const Objective f = resolve_minimizer(objective);
  const int d = f.dim();
  std::vector<std::string> header{"t"};
  for (int i = 0; i < d; ++i) header.push_back("X_" + std::to_string(i));
  for (int i = 0; i < d; ++i) header.push_back("Xdot_" + std::to_string(i));
  header.emplace_back("f_gap");
  header.emplace_back("lyapunov");
  write_row(out, header);

  const double c = 1.0 + 2.0 * std::sqrt(mu * s);
  for (const auto& st : solution) {
    std::vector<std::string> row{format_double(st.t)};
    for (int i = 0; i < d; ++i) row.push_back(format_double(st.X[i]));
    for (int i = 0; i < d; ++i) row.push_back(format_double(st.Xdot[i]));
    row.push_back(format_double(f.gap(st.X + (std::sqrt(s) / c) * st.Xdot)));
    row.push_back(format_double(lyap_ode(f, st.X, st.Xdot, s, mu).energy));
    write_row(out, row);
  }
}

void write_monotonicity(std::ostream& out, const MonotonicityReport& report) {
  write_row(out, {"s", "lambda", "discriminant", "root1_re", "root1_im", "root2_re", "root2_im",
                  "predicted_monotone", "observed_monotone"});
  for (const auto& r : report.rows) {
    write_row(out, {format_double(r.s), format_double(r.lambda),
                    format_double(r.roots.discriminant), format_double(r.roots.roots[0].real()),
                    format_double(r.roots.roots[0].imag()), format_double(r.roots.roots[1].real()),
                    format_double(r.roots.roots[1].imag()), r.predicted_monotone ? "true" : "false",
                    r.observed_monotone ? "true" : "false"});
  }
}

}  // namespace hrde::csv
