#include <doctest.h>

#include <cmath>

#include "hrde/lyapunov.hpp"
#include "hrde/rng.hpp"

using namespace hrde;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

const Objective& half_square() {
  static const Objective f = make_quadratic(SpectrumSpec({1.0}));
  return f;
}

// f(x - shift) with minimizer moved to `shift`.
Objective shifted(const Objective& f, const Vector& shift) {
  auto value = [f, shift](const Vector& x) { return f.value(x - shift); };
  auto grad = [f, shift](const Vector& x) { return f.gradient(x - shift); };
  return Objective(f.id() + "-shifted", f.dim(), f.mu(), f.lipschitz(), value, grad, shift,
                   *f.min_value());
}

void check_sum(const LyapunovRecord& r) {
  const double sum = r.potential + r.kinetic + r.mixed + r.additional;
  CHECK(std::abs(r.energy - sum) <= 1e-12 * std::max(1.0, std::abs(sum)));
}

}  // namespace

TEST_CASE("lyap_gc examples") {
  const Objective& f = half_square();
  CHECK(lyap_gc(f, scalar(0), scalar(0), scalar(0), 1.0, 1.0).energy == 0.0);
  const LyapunovRecord r = lyap_gc(f, scalar(1), scalar(1), scalar(0), 1.0, 1.0);
  CHECK(r.potential == 0.5);
  CHECK(r.kinetic == 0.0);
  CHECK(r.mixed == 2.25);
  CHECK(r.additional == -0.5);
  CHECK(r.energy == 2.25);
}

TEST_CASE("lyap_iv examples") {
  const Objective& f = half_square();
  CHECK(lyap_iv(f, scalar(0), scalar(0), scalar(0), 1.0, 1.0).energy == 0.0);
  const LyapunovRecord r = lyap_iv(f, scalar(1), scalar(0), scalar(1), 1.0, 1.0);
  CHECK(r.energy == 1.5);
  CHECK(r.additional == 0.0);
}

TEST_CASE("lyap_ode examples") {
  const Objective& f = half_square();
  CHECK(lyap_ode(f, scalar(0), scalar(0), 1.0, 1.0).energy == 0.0);
  CHECK(lyap_ode(f, scalar(1), scalar(0), 1.0, 1.0).energy == 1.5);
}

TEST_CASE("minimizer required") {
  auto val = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  auto grad = [](const Vector& x) { return Vector(x); };
  const Objective f("anon", 1, 1.0, 1.0, val, grad);
  CHECK_THROWS_AS(lyap_iv(f, scalar(1), scalar(0), scalar(1), 1.0, 1.0), std::logic_error);
  CHECK_THROWS_AS(lyap_gc(f, scalar(1), scalar(1), scalar(0), 1.0, 1.0), std::logic_error);
  CHECK_THROWS_AS(lyap_ode(f, scalar(1), scalar(0), 1.0, 1.0), std::logic_error);
}

TEST_CASE("component sum and gc nonnegativity along runs") {
  const std::vector<Objective> objectives{make_quadratic(SpectrumSpec({1.0, 100.0})),
                                          make_quadratic(SpectrumSpec::log_spaced(10, 1.0, 100.0), 7),
                                          resolve_minimizer(make_reg_logistic(3, 50, 2, 0.1))};
  for (const auto& f : objectives) {
    const double s = 1.0 / f.lipschitz();
    const Vector x0 = Vector::Ones(f.dim()) * 2.0;
    for (const auto& r : lyapunov_series(run(f, Method::gc_phase, x0, s, 300), f, LyapunovForm::gc)) {
      check_sum(r);
      CHECK(r.energy >= -1e-12);
    }
    for (const auto& r : lyapunov_series(run(f, Method::iv_phase, x0, s, 300), f, LyapunovForm::iv))
      check_sum(r);
  }
}

TEST_CASE("lyap_iv is translation invariant") {
  const Objective f = make_quadratic(SpectrumSpec::log_spaced(4, 1.0, 20.0), 3);
  Rng rng(8);
  const Vector shift = rng.normal_vector(4) * 3.0;
  const Objective g = shifted(f, shift);
  for (int i = 0; i < 10; ++i) {
    const Vector y = rng.normal_vector(4), v = rng.normal_vector(4), x = rng.normal_vector(4);
    const double a = lyap_iv(f, y, v, x, 0.04, f.mu()).energy;
    const double b = lyap_iv(g, y + shift, v, x + shift, 0.04, f.mu()).energy;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("optimum start is trivially certified") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  Trajectory t = run(f, Method::iv_phase, Vector::Zero(2), 0.25, 50);
  attach_lyapunov(t, f, LyapunovForm::iv);
  for (const auto& r : t.records) CHECK(*r.lyapunov == 0.0);
  CHECK(certify_contraction(t, LyapunovForm::iv).cert.passed());
}

TEST_CASE("gc contraction along gc-phase on quad [1,4], s=1/4") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  Trajectory t = run(f, Method::gc_phase, Vector::Ones(2), 0.25, 1000);
  attach_lyapunov(t, f, LyapunovForm::gc);
  const double rho = std::sqrt(0.25) / 4.0;
  // Difference form: E(k+1) - E(k) <= -rho E(k+1) + 1e-10.
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k)
    CHECK(*t.records[k + 1].lyapunov - *t.records[k].lyapunov <= -rho * *t.records[k + 1].lyapunov + 1e-10);
  CHECK(certify_contraction(t, LyapunovForm::gc).cert.passed());
}

TEST_CASE("iv contraction on quad [1,100] and an over-tight rate") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 100.0}));
  Trajectory t = run(f, Method::iv_phase, Vector::Ones(2), 0.01, 500);
  attach_lyapunov(t, f, LyapunovForm::iv);
  const ContractionReport ok = certify_contraction(t, LyapunovForm::iv);
  CHECK(ok.cert.passed());
  CHECK(ok.rho == doctest::Approx(0.025));
  CHECK(ok.max_ratio <= 1.0 / (1.0 + ok.rho) + 1e-12);

  const ContractionReport tight = certify_contraction(t, LyapunovForm::iv, 10.0 * std::sqrt(0.01));
  CHECK_FALSE(tight.cert.passed());
  REQUIRE(tight.cert.first_failure.has_value());
  CHECK(*tight.cert.first_failure < 20);
}

TEST_CASE("contraction on every suite objective for both forms") {
  const std::vector<Objective> objectives{
      make_quadratic(SpectrumSpec({1.0, 100.0})), make_quadratic(SpectrumSpec({0.5, 3.0})),
      make_quadratic(SpectrumSpec::log_spaced(20, 1.0, 1e3)),
      make_quadratic(SpectrumSpec::log_spaced(10, 1.0, 100.0), 7),
      resolve_minimizer(make_reg_logistic(3, 50, 2, 0.1))};
  for (const auto& f : objectives)
    for (double s : {1.0 / f.lipschitz(), 0.5 / f.lipschitz()}) {
      Trajectory gc = run(f, Method::gc_phase, Vector::Ones(f.dim()), s, 1000);
      attach_lyapunov(gc, f, LyapunovForm::gc);
      CHECK(certify_contraction(gc, LyapunovForm::gc).cert.passed());
      Trajectory iv = run(f, Method::iv_phase, Vector::Ones(f.dim()), s, 1000);
      attach_lyapunov(iv, f, LyapunovForm::iv);
      CHECK(certify_contraction(iv, LyapunovForm::iv).cert.passed());
    }
}

TEST_CASE("incompatible forms are rejected") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  Trajectory gd = run(f, Method::gd, Vector::Ones(2), 0.25, 5);
  CHECK_THROWS_AS(lyapunov_series(gd, f, LyapunovForm::iv), std::invalid_argument);
  Trajectory iv = run(f, Method::iv_phase, Vector::Ones(2), 0.25, 5);
  CHECK_THROWS_AS(lyapunov_series(iv, f, LyapunovForm::gc), std::invalid_argument);
  CHECK_THROWS_AS(certify_contraction(iv, LyapunovForm::iv), std::invalid_argument);  // no energies yet
  CHECK(parse_lyapunov_form("gc") == LyapunovForm::gc);
  CHECK_THROWS_AS(parse_lyapunov_form("xyz"), std::invalid_argument);
}

TEST_CASE("energy weights hook") {
  const Objective& f = half_square();
  const LyapunovRecord r = lyap_iv(f, scalar(1), scalar(0.5), scalar(1), 1.0, 1.0, {0.3, 0.7});
  check_sum(r);
  CHECK(r.kinetic == doctest::Approx(0.5 * 0.3 * 0.25 / 9.0));
  CHECK(r.mixed == doctest::Approx(0.5 * 0.7 * 2.5 * 2.5));
  CHECK_THROWS_AS(lyap_iv(f, scalar(1), scalar(0), scalar(1), 1.0, 1.0, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(lyap_gc(f, scalar(1), scalar(1), scalar(0), 1.0, 1.0, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("initial energy under the v_1 conventions") {
  const Objective& f = half_square();
  const double s = 1.0;
  // scheme: v_1 = -1, x_1 = 0 -> E = 0.5 + 1/36 + 1/4.
  CHECK(initial_energy_iv(f, scalar(1), s, FirstVelocity::scheme) == doctest::Approx(0.5 + 1.0 / 36.0 + 0.25));
  // zero: v_1 = 0, x_1 = 1 -> E = 0.5 + 0 + 1.
  CHECK(initial_energy_iv(f, scalar(1), s, FirstVelocity::zero) == doctest::Approx(1.5));
  // gradient: v_1 = 2, x_1 = 3 -> E = 0.5 + 4/36 + (2 + 6)^2/4.
  CHECK(initial_energy_iv(f, scalar(1), s, FirstVelocity::gradient) == doctest::Approx(0.5 + 4.0 / 36.0 + 16.0));
}
