#include <doctest.h>

#include <cmath>

#include "hrde/optimizers.hpp"
#include "hrde/rng.hpp"

using namespace hrde;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

const Objective& half_square() {
  static const Objective f = make_quadratic(SpectrumSpec({1.0}));
  return f;
}

OptimizerState start(const Objective& f, Method m, const Vector& x0, double s) {
  return initial_state(f, m, x0, s);
}

double max_abs(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

std::vector<Vector> xs(const Trajectory& t) {
  std::vector<Vector> out;
  for (const auto& r : t.records) out.push_back(r.state.x);
  return out;
}

std::vector<Vector> ys(const Trajectory& t) {
  std::vector<Vector> out;
  for (const auto& r : t.records) out.push_back(r.state.y);
  return out;
}

}  // namespace

TEST_CASE("method identifiers round-trip") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(all_methods().size() == 7);
  CHECK_THROWS_AS(parse_method("adam"), std::invalid_argument);
  CHECK(parse_method("iv-phase") == Method::iv_phase);
}

TEST_CASE("gd_step examples") {
  const Objective& f = half_square();
  CHECK(gd_step(f, start(f, Method::gd, scalar(1.0), 1.0)).x[0] == 0.0);
  CHECK(gd_step(f, start(f, Method::gd, scalar(1.0), 0.5)).x[0] == 0.5);
  const Objective q = make_quadratic(SpectrumSpec({1.0, 100.0}));
  const OptimizerState next = gd_step(q, start(q, Method::gd, Vector::Ones(2), 0.01));
  CHECK(next.x[0] == doctest::Approx(0.99).epsilon(1e-15));
  CHECK(next.x[1] == 0.0);
  CHECK(next.k == 1);
  CHECK(next.y == Vector::Ones(2));  // copied through
}

TEST_CASE("heavy_ball_step examples") {
  const Objective& f = half_square();
  OptimizerState st = start(f, Method::heavy_ball, scalar(1.0), 1.0);
  CHECK(heavy_ball_step(f, st, 0.5).x[0] == 0.0);
  st.x = scalar(0.0);
  st.v = scalar(1.0);
  const OptimizerState next = heavy_ball_step(f, st, 0.5);
  CHECK(next.x[0] == 0.5);
  CHECK(next.v[0] == 0.5);
  CHECK_THROWS_AS(heavy_ball_step(f, st, 1.0), std::invalid_argument);

  const Objective q = make_quadratic(SpectrumSpec::log_spaced(4, 1.0, 30.0), 2);
  Rng rng(5);
  OptimizerState a = start(q, Method::heavy_ball, rng.normal_vector(4), 0.02);
  a.v = rng.normal_vector(4);
  CHECK(heavy_ball_step(q, a, 0.0).x == gd_step(q, a).x);
}

TEST_CASE("default heavy-ball beta") {
  CHECK(default_heavy_ball_beta(1.0, 0.25) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("nag_classic_step examples") {
  const Objective& f = half_square();
  OptimizerState a = nag_classic_step(f, start(f, Method::nag_classic, scalar(1.0), 1.0));
  CHECK(a.x[0] == 0.0);
  CHECK(a.y[0] == 0.0);
  CHECK(classic_momentum(1.0, 1.0) == 0.0);
  OptimizerState b = nag_classic_step(f, start(f, Method::nag_classic, scalar(1.0), 0.25));
  CHECK(b.x[0] == 0.75);
  CHECK(classic_momentum(1.0, 0.25) == doctest::Approx(1.0 / 3.0));
  CHECK(b.y[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("nag-classic beats gd after 200 steps on quad [1,100]") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 100.0}));
  const Trajectory nag = run(q, Method::nag_classic, Vector::Ones(2), 0.01, 200);
  const Trajectory gd = run(q, Method::gd, Vector::Ones(2), 0.01, 200);
  CHECK(nag.records.back().f_gap < gd.records.back().f_gap);
}

TEST_CASE("nag_modified_step examples") {
  const Objective& f = half_square();
  OptimizerState a = nag_modified_step(f, start(f, Method::nag_modified, scalar(1.0), 1.0));
  CHECK(a.x[0] == 0.0);
  CHECK(a.y[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  OptimizerState b = nag_modified_step(f, start(f, Method::nag_modified, scalar(1.0), 0.25));
  CHECK(b.x[0] == 0.75);
  CHECK(b.y[0] == 0.625);
  CHECK(b.v[0] == doctest::Approx(-0.5));
  OptimizerState fixed = nag_modified_step(f, start(f, Method::nag_modified, scalar(0.0), 0.3));
  CHECK(fixed.x[0] == 0.0);
  CHECK(fixed.y[0] == 0.0);
}

TEST_CASE("gc_modified_step examples") {
  const Objective& f = half_square();
  const GcStepResult r = gc_modified_step(f, scalar(1.0), scalar(1.0), scalar(1.0), 1.0, 1.0);
  CHECK(r.y_next[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.grad_curr[0] == 1.0);
  const GcStepResult still = gc_modified_step(f, scalar(0.0), scalar(0.0), scalar(0.0), 0.5, 1.0);
  CHECK(still.y_next[0] == 0.0);
}

TEST_CASE("gc_phase_step examples") {
  const Objective& f = half_square();
  const OptimizerState s0 = start(f, Method::gc_phase, scalar(1.0), 1.0);
  const OptimizerState s1 = gc_phase_step(f, s0);
  CHECK(s1.v[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));  // v_0
  CHECK(s1.y[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(s1.x[0] == 0.0);  // x_1 = y_0 - s grad f(y_0)
  const OptimizerState z = gc_phase_step(f, start(f, Method::gc_phase, scalar(0.0), 1.0));
  CHECK(z.y[0] == 0.0);
  CHECK(z.v[0] == 0.0);
}

TEST_CASE("iv_phase_step examples") {
  const Objective& f = half_square();
  const OptimizerState s1 = iv_phase_step(f, start(f, Method::iv_phase, scalar(1.0), 1.0));
  CHECK(s1.v[0] == -1.0);
  CHECK(s1.x[0] == 0.0);
  const OptimizerState m1 = nag_modified_step(f, start(f, Method::nag_modified, scalar(1.0), 1.0));
  CHECK(s1.x[0] == m1.x[0]);
  CHECK(s1.y[0] == doctest::Approx(m1.y[0]).epsilon(1e-15));
  const OptimizerState z = iv_phase_step(f, start(f, Method::iv_phase, scalar(0.0), 1.0));
  CHECK(z.x[0] == 0.0);
  CHECK(z.v[0] == 0.0);
}

TEST_CASE("gc single-sequence matches phase-space on quad [1,4], 50 steps") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 4.0}));
  const double s = 0.25;
  // Single-sequence oracle, seeded with the virtual predecessor y_{-1} = y_0.
  Vector y_prev = Vector::Ones(2), y = Vector::Ones(2), g_prev = q.gradient(y);
  std::vector<Vector> single{y};
  for (int k = 0; k < 50; ++k) {
    GcStepResult r = gc_modified_step(q, y, y_prev, g_prev, s, q.mu());
    y_prev = y;
    y = r.y_next;
    g_prev = r.grad_curr;
    single.push_back(y);
  }
  CHECK(max_abs(single, ys(run(q, Method::gc_phase, Vector::Ones(2), s, 50))) <= 1e-12);
}

TEST_CASE("gc-phase equals gc-modified on a random start, quad [0.5,3]") {
  const Objective q = make_quadratic(SpectrumSpec({0.5, 3.0}));
  const Vector x0 = Rng(17).in_ball(Vector::Zero(2), 5.0);
  const double s = 1.0 / 3.0;
  CHECK(max_abs(ys(run(q, Method::gc_phase, x0, s, 100)), ys(run(q, Method::gc_modified, x0, s, 100))) <=
        1e-12);
}

TEST_CASE("iv-phase x-sequence equals modified NAG on quad [1,100]") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 100.0}));
  CHECK(max_abs(xs(run(q, Method::iv_phase, Vector::Ones(2), 0.01, 500)),
                xs(run(q, Method::nag_modified, Vector::Ones(2), 0.01, 500))) <= 1e-10);
}

TEST_CASE("rewriting equivalence on every shipped objective, s in {1/L, 1/(2L)}") {
  const std::vector<Objective> objectives{
      make_quadratic(SpectrumSpec({1.0, 100.0})), make_quadratic(SpectrumSpec({0.5, 3.0})),
      make_quadratic(SpectrumSpec::log_spaced(20, 1.0, 1e3)),
      make_quadratic(SpectrumSpec::log_spaced(10, 1.0, 100.0), 7), make_reg_logistic(3, 50, 2, 0.1)};
  for (const auto& f : objectives)
    for (double s : {1.0 / f.lipschitz(), 0.5 / f.lipschitz()}) {
      const Vector x0 = Vector::Ones(f.dim());
      CHECK(max_abs(xs(run(f, Method::iv_phase, x0, s, 1000)), xs(run(f, Method::nag_modified, x0, s, 1000))) <=
            1e-9);
      CHECK(max_abs(ys(run(f, Method::gc_phase, x0, s, 1000)), ys(run(f, Method::gc_modified, x0, s, 1000))) <=
            1e-9);
    }
}

TEST_CASE("gradient-step inequality along Nesterov-family runs") {
  const Objective f = make_reg_logistic(3, 50, 2, 0.1);
  const Objective r = resolve_minimizer(f);
  const double s = 1.0 / f.lipschitz();
  for (Method m : {Method::nag_classic, Method::nag_modified, Method::gc_phase, Method::iv_phase}) {
    const Trajectory t = run(f, m, Vector::Ones(2) * 3.0, s, 300);
    for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
      const Vector& y = t.records[k].state.y;
      const double rhs = r.gap(y) - 0.5 * s * f.gradient(y).squaredNorm() + 1e-12;
      CHECK(r.gap(t.records[k + 1].state.x) <= rhs);
    }
  }
}

TEST_CASE("gd descends with s <= 1/L") {
  const Objective q = make_quadratic(SpectrumSpec::log_spaced(8, 0.5, 40.0), 4);
  const Trajectory t = run(q, Method::gd, Vector::Ones(8), 1.0 / q.lipschitz(), 300);
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k)
    CHECK(t.records[k + 1].f_gap <= t.records[k].f_gap + 1e-12);
}

TEST_CASE("run bookkeeping") {
  const Objective& f = half_square();
  const Trajectory empty = run(f, Method::gd, scalar(1.0), 1.0, 0);
  REQUIRE(empty.records.size() == 1);
  CHECK(empty.records[0].state.k == 0);
  CHECK(empty.records[0].f_gap == 0.5);

  const Trajectory gd = run(f, Method::gd, scalar(1.0), 1.0, 3);
  REQUIRE(gd.records.size() == 4);
  CHECK(gd.records[0].f_gap == 0.5);
  for (int k = 1; k <= 3; ++k) CHECK(gd.records[k].f_gap == 0.0);
  for (std::size_t k = 0; k < gd.records.size(); ++k) CHECK(gd.records[k].state.k == k);

  CHECK_THROWS_AS(run(f, Method::gd, Vector::Ones(2), 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(run(f, Method::gd, scalar(1.0), 0.0, 3), std::invalid_argument);
  RunOptions opt;
  opt.first_velocity = FirstVelocity::zero;
  CHECK_THROWS_AS(run(f, Method::gc_phase, scalar(1.0), 1.0, 3, opt), std::invalid_argument);
}

TEST_CASE("iv-phase on quad [1,100] respects the rate-iv curve") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 100.0}));
  const Trajectory t = run(q, Method::iv_phase, Vector::Ones(2), 0.01, 300);
  const double d0 = 2.0, L = 100.0, rate = 1.0 + std::sqrt(0.01) / 4.0;
  for (std::size_t k = 0; k < t.records.size(); ++k)
    CHECK(t.records[k].f_gap <= 4.0 * L * d0 / std::pow(rate, static_cast<double>(k)));
}

TEST_CASE("warnings for large steps, not aborts") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 3.0}));
  const Trajectory t = run(q, Method::gc_phase, Vector::Ones(2), 0.5, 10);
  CHECK(t.warnings.size() == 1);
  CHECK(t.records.size() == 11);
  const Trajectory c = run(half_square(), Method::nag_classic, scalar(1.0), 2.0, 3);
  CHECK(c.warnings.size() == 2);
}

TEST_CASE("non-finite iterates abort the run and record k") {
  const Objective q = make_quadratic(SpectrumSpec({1.0, 100.0}));
  const Trajectory t = run(q, Method::gd, Vector::Ones(2), 1.0, 1000);
  REQUIRE(t.aborted_at.has_value());
  CHECK(t.records.size() == *t.aborted_at);
  for (const auto& r : t.records) CHECK(std::isfinite(r.f_gap));
}

TEST_CASE("runs are deterministic") {
  const Objective f = make_reg_logistic(3, 50, 2, 0.1);
  for (Method m : all_methods()) {
    const Trajectory a = run(f, m, Vector::Ones(2), 0.5 / f.lipschitz(), 200);
    const Trajectory b = run(f, m, Vector::Ones(2), 0.5 / f.lipschitz(), 200);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].state.x == b.records[k].state.x);
      CHECK(a.records[k].state.y == b.records[k].state.y);
      CHECK(a.records[k].f_gap == b.records[k].f_gap);
    }
  }
}

TEST_CASE("first-velocity conventions") {
  const Objective& f = half_square();
  const double s = 0.25;
  RunOptions zero, grad;
  zero.first_velocity = FirstVelocity::zero;
  grad.first_velocity = FirstVelocity::gradient;
  const Trajectory z = run(f, Method::iv_phase, scalar(1.0), s, 2, zero);
  CHECK(z.records[1].state.v[0] == 0.0);
  CHECK(z.records[1].state.x[0] == 1.0);
  const Trajectory g = run(f, Method::iv_phase, scalar(1.0), s, 2, grad);
  CHECK(g.records[1].state.v[0] == doctest::Approx(2.0 * std::sqrt(s)));
  for (auto fv : {FirstVelocity::scheme, FirstVelocity::zero, FirstVelocity::gradient})
    CHECK(parse_first_velocity(to_string(fv)) == fv);
  // The override is applied identically to both implicit-velocity forms.
  const Trajectory nz = run(f, Method::nag_modified, scalar(1.0), s, 5, zero);
  const Trajectory iz = run(f, Method::iv_phase, scalar(1.0), s, 5, zero);
  CHECK(max_abs(xs(nz), xs(iz)) <= 1e-15);
}
