#include <doctest.h>

#include <cmath>

#include "hrde/hires_ode.hpp"
#include "hrde/rng.hpp"

using namespace hrde;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

const Objective& half_square() {
  static const Objective f = make_quadratic(SpectrumSpec({1.0}));
  return f;
}

// Exact solution of X'' + b X' + X = 0 with X(0) = 1, X'(0) = 0, b > 2.
double damped_exact(double b, double t) {
  const double w = std::sqrt(b * b / 4.0 - 1.0);
  return std::exp(-b * t / 2.0) * (std::cosh(w * t) + (b / 2.0) * std::sinh(w * t) / w);
}

// Damping of the simplified equation on x^2/2 with mu = 1.
double damping(double s) { return 2.0 + std::sqrt(s) / (1.0 + 2.0 * std::sqrt(s)); }

}  // namespace

TEST_CASE("rhs_simplified examples") {
  const Objective& f = half_square();
  const OdeDerivative eq = rhs_simplified(f, {0.0, scalar(0), scalar(0)}, 1.0, 1.0);
  CHECK(eq.dX[0] == 0.0);
  CHECK(eq.dXdot[0] == 0.0);
  CHECK(rhs_simplified(f, {0.0, scalar(1), scalar(0)}, 1.0, 1.0).dXdot[0] == -1.0);
  const OdeDerivative d = rhs_simplified(f, {0.0, scalar(0), scalar(1)}, 1.0, 1.0);
  CHECK(d.dX[0] == 1.0);
  CHECK(d.dXdot[0] == doctest::Approx(-7.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rhs_original examples") {
  const Objective& f = half_square();
  const OdeDerivative eq = rhs_original(f, {0.0, scalar(0), scalar(0)}, 1.0, 1.0);
  CHECK(eq.dXdot[0] == 0.0);
  CHECK(rhs_original(f, {0.0, scalar(1), scalar(0)}, 1.0, 1.0).dXdot[0] == -1.5);
}

TEST_CASE("original and simplified agree as s -> 0") {
  const Objective f = make_quadratic(SpectrumSpec::log_spaced(3, 1.0, 10.0), 2);
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const OdeState st{0.0, rng.normal_vector(3), rng.normal_vector(3)};
    const double diff =
        (rhs_original(f, st, 1e-8, 1.0).dXdot - rhs_simplified(f, st, 1e-8, 1.0).dXdot).norm();
    const double scale = std::sqrt(st.X.squaredNorm() + st.Xdot.squaredNorm());
    CHECK(diff < 1e-3 * scale);
  }
}

TEST_CASE("integrate bookkeeping") {
  const Objective& f = half_square();
  const auto single = integrate(f, scalar(1), 0.01, 0.0, 1e-3);
  REQUIRE(single.size() == 1);
  CHECK(single[0].t == 0.0);
  CHECK(single[0].Xdot[0] == 0.0);

  const auto sol = integrate(f, scalar(1), 0.01, 0.105, 0.01);
  CHECK(sol.size() == 12);
  CHECK(sol.back().t == 0.105);
  for (std::size_t i = 1; i < sol.size(); ++i) CHECK(sol[i].t > sol[i - 1].t);

  CHECK(integrate(f, scalar(1), 0.01, 1.0, 0.1).size() == 11);
  CHECK_THROWS_AS(integrate(f, scalar(1), 0.01, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate(f, scalar(1), 0.01, 1.0, -1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate(f, scalar(1), 0.01, -1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate(f, Vector::Ones(2), 0.01, 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("default step") {
  CHECK(default_ode_step(1.0) == 1e-3);
  CHECK(default_ode_step(1e-6) == doctest::Approx(1e-4));
}

TEST_CASE("critically damped limit at t = 1") {
  const Objective& f = half_square();
  const double s = 1e-12;
  const auto sol = integrate(f, scalar(1), s, 1.0, 1e-3);
  // At s = 1e-12 the implicit-velocity term still shifts X(1) by ~6e-8, so
  // the tight comparison is against the exact solution with that damping.
  CHECK(std::abs(sol.back().X[0] - damped_exact(damping(s), 1.0)) <= 1e-8);
  CHECK(std::abs(sol.back().X[0] - 2.0 / std::exp(1.0)) <= 1e-7);
}

TEST_CASE("RK4 is fourth order") {
  const Objective& f = half_square();
  const double s = 1e-12;
  const double exact = damped_exact(damping(s), 1.0);
  const double e1 = std::abs(integrate(f, scalar(1), s, 1.0, 1e-2).back().X[0] - exact);
  const double e2 = std::abs(integrate(f, scalar(1), s, 1.0, 5e-3).back().X[0] - exact);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("equilibrium is stable") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}), 3);
  for (const auto& st : integrate(f, Vector::Zero(2), 0.25, 5.0, 1e-3)) {
    CHECK(st.X.norm() <= 1e-12);
    CHECK(st.Xdot.norm() <= 1e-12);
  }
}

TEST_CASE("non-finite states are reported") {
  auto val = [](const Vector& x) { return -1e300 * x.squaredNorm(); };
  auto grad = [](const Vector& x) { return Vector(-1e300 * x); };
  const Objective bad("bad", 1, 1.0, 1.0, val, grad);
  CHECK_THROWS_AS(integrate(bad, scalar(1), 0.01, 1.0, 0.1), NonFiniteStateError);
}

TEST_CASE("continuous bound at t = 0 on x^2/2") {
  const Objective& f = half_square();
  const auto sol = integrate(f, scalar(1), 1.0, 0.0, 1e-3);
  const ContinuousReport rep = check_continuous_bound(sol, f, 1.0, 1.0);
  CHECK(rep.bound.passed());
  CHECK(rep.bound.worst_margin == doctest::Approx(0.25 + kContinuousBoundTolerance));
}

TEST_CASE("Lyapunov decay along quad [1,4], s = 1/4") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  for (const Vector& x0 : {Vector(Vector::Ones(2)), Vector(Vector::Unit(2, 0)), Vector(Vector::Unit(2, 1))}) {
    const auto sol = integrate(f, x0, 0.25, 20.0, 1e-3);
    const ContinuousReport rep = check_continuous_bound(sol, f, 0.25, 1.0);
    CHECK(rep.decay.passed());
    CHECK(rep.max_ratio <= 1.0);
    for (std::size_t i = 1; i < rep.lyapunov.size(); ++i)
      CHECK(rep.lyapunov[i].energy <= rep.lyapunov[i - 1].energy + 1e-8);
  }
}

TEST_CASE("halved continuous bound needs f(x0) - f* <= mu ||x0 - x*||^2") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  // Start along the mu-eigenvector: f0 = 1/2 <= mu d0^2 = 1, bound holds throughout.
  const auto aligned = integrate(f, Vector::Unit(2, 0), 0.25, 20.0, 1e-3);
  CHECK(check_continuous_bound(aligned, f, 0.25, 1.0).bound.passed());
  // From (1, 1): f0 = 2.5 > mu d0^2 = 2, so the bound fails already at t = 0.
  const auto ones = integrate(f, Vector::Ones(2), 0.25, 20.0, 1e-3);
  const ContinuousReport rep = check_continuous_bound(ones, f, 0.25, 1.0);
  REQUIRE(rep.bound.first_failure.has_value());
  CHECK(*rep.bound.first_failure == 0);
  // E(t) itself dominates the gap, so the bound without the 1/2 holds.
  const double e0 = rep.lyapunov.front().energy;
  CHECK(e0 == doctest::Approx(2.5 + 2.0));
  for (std::size_t i = 0; i < ones.size(); ++i)
    CHECK(rep.lyapunov[i].potential <= e0 * std::exp(-ones[i].t / 4.0) + 1e-12);
}

TEST_CASE("over-tight decay exponent is caught") {
  const Objective f = make_quadratic(SpectrumSpec({1.0, 4.0}));
  const auto sol = integrate(f, Vector::Unit(2, 0), 0.25, 20.0, 1e-3);
  CHECK(check_continuous_bound(sol, f, 0.25, 1.0).bound.passed());
  // Rate sqrt(mu) instead of sqrt(mu)/4: the energy cannot keep up.
  const ContinuousReport rep = check_continuous_bound(sol, f, 0.25, 1.0, 1.0);
  CHECK_FALSE(rep.decay.passed());
  REQUIRE(rep.decay.first_failure.has_value());
  // Along this eigen-direction the gap decays like (1 + t)^2 e^{-2t} / 2, so
  // an exponent of 2 sqrt(mu) breaks the bound too.
  CHECK_FALSE(check_continuous_bound(sol, f, 0.25, 1.0, 2.0).bound.passed());
}

TEST_CASE("ode form identifiers") {
  CHECK(parse_ode_form("original") == OdeForm::original);
  CHECK(to_string(OdeForm::simplified) == "simplified");
  CHECK_THROWS_AS(parse_ode_form("other"), std::invalid_argument);
}
