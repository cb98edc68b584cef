#include <cmath>

#include "doctest.h"
#include "savopt/problems.hpp"
#include "savopt/rng.hpp"
#include "savopt/sav.hpp"
#include "savopt/verify.hpp"
#include "test_util.hpp"

using namespace savopt;
using savopt::testing::QuarticWell;
using savopt::testing::WeightedSquare;

namespace {
Vec scalar(double x) {
  Vec v(1);
  v << x;
  return v;
}
}  // namespace

TEST_CASE("modified SAV one-step oracle on f = theta^2, L = 0") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s = init_sav_state(sq, scalar(1.0), 1.0);
  CHECK(s.r == doctest::Approx(std::sqrt(2.0)));
  const LinearOperator zero = LinearOperator::zero(1);
  const StepResult step = modified_sav_step(s, sq, zero, 1.0);
  // Hand substitution: denominator 1 + 1*4/(2*2) = 2.
  CHECK(step.state.r == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(step.state.theta[0] == doctest::Approx(0.0));
  CHECK(step.trace.alpha == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("modified SAV one-step oracle with L = 2I") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s = init_sav_state(sq, scalar(1.0), 1.0);
  const LinearOperator op = LinearOperator::scaled_identity(2.0, 1);
  const StepResult step = modified_sav_step(s, sq, op, 1.0);
  // ghat = 2/3, denominator 4/3: r1 = 3 sqrt(2)/4, theta1 = 1/2.
  CHECK(step.state.r == doctest::Approx(3.0 * std::sqrt(2.0) / 4.0).epsilon(1e-15));
  CHECK(step.state.theta[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("zero gradient is a fixed point") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s = init_sav_state(sq, scalar(0.0), 0.3);
  const LinearOperator op = LinearOperator::scaled_identity(1.0, 1);
  const StepResult step = modified_sav_step(s, sq, op, 0.3);
  CHECK(step.state.theta[0] == 0.0);
  CHECK(step.state.r == s.r);
}

TEST_CASE("savgd agrees with modified SAV under the Zero operator bit-for-bit") {
  QuadraticProblem quad;
  const LinearOperator zero = LinearOperator::zero(quad.dimension());
  SavState a = init_sav_state(quad, Vec::Ones(quad.dimension()), 0.7);
  SavState b = a;
  for (int k = 0; k < 100; ++k) {
    a = savgd_step(a, quad, 0.7).state;
    b = modified_sav_step(b, quad, zero, 0.7).state;
    REQUIRE(a.theta == b.theta);
    REQUIRE(a.r == b.r);
  }
}

TEST_CASE("savgd: r decreases strictly while the gradient is nonzero") {
  QuadraticProblem quad;
  SavState s = init_sav_state(quad, Vec::Ones(quad.dimension()), 0.5);
  for (int k = 0; k < 50; ++k) {
    const StepResult step = savgd_step(s, quad, 0.5);
    CHECK(step.state.r < s.r);
    s = step.state;
  }
}

TEST_CASE("savgd on the paper quadratic reaches 1e-8 in 1000 fixed steps at dt = 1") {
  QuadraticProblem quad;
  SavState s = init_sav_state(quad, Vec::Ones(quad.dimension()), 1.0);
  for (int k = 0; k < 1000; ++k) s = savgd_step(s, quad, 1.0).state;
  CHECK(quad.value(s.theta) <= 1e-8);
}

TEST_CASE("msav resets r to sqrt(f+C) and the indicator to one") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s = init_sav_state(sq, scalar(1.0), 1.0);
  const LinearOperator zero = LinearOperator::zero(1);
  const StepResult step = msav_step(s, sq, zero, 1.0);
  CHECK(step.state.theta[0] == doctest::Approx(0.0));
  CHECK(step.state.r == doctest::Approx(1.0));  // sqrt(f(0) + 1)
  const double indicator =
      step.state.r / std::sqrt(sq.value(step.state.theta) + sq.shift_c());
  CHECK(indicator == doctest::Approx(1.0));
  // r-tilde is kept in the trace alongside the reset value.
  CHECK(step.trace.r_tilde == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("legacy SAV one-step oracle on f = theta^2 with L = I") {
  WeightedSquare sq = WeightedSquare::one_dim();
  const LinearOperator op = LinearOperator::scaled_identity(1.0, 1);
  // r0 = sqrt(g(1) + 1) with g = f - theta^2/2.
  SavState s;
  s.theta = scalar(1.0);
  s.r = std::sqrt(1.5);
  s.dt = 1.0;
  const StepResult step = legacy_sav_step(s, sq, op, 1.0, 1.0);
  // Hand substitution of the two-line legacy scheme:
  //   h = 1/sqrt(1.5), r1 = (sqrt(1.5) - 0.25/sqrt(1.5)) / (7/6) = 5 sqrt(1.5)/7,
  //   theta1 = (1 - r1/sqrt(1.5)) / 2 = 1/7.
  CHECK(step.state.r == doctest::Approx(5.0 * std::sqrt(1.5) / 7.0).epsilon(1e-14));
  CHECK(step.state.theta[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("legacy SAV with L = 0 matches savgd") {
  QuadraticProblem quad;
  const LinearOperator zero = LinearOperator::zero(quad.dimension());
  SavState a = init_sav_state(quad, Vec::Ones(quad.dimension()), 0.4);
  SavState b = a;
  for (int k = 0; k < 50; ++k) {
    a = legacy_sav_step(a, quad, zero, quad.shift_c(), 0.4).state;
    b = savgd_step(b, quad, 0.4).state;
    REQUIRE(a.theta.isApprox(b.theta, 1e-14));
    REQUIRE(a.r == doctest::Approx(b.r).epsilon(1e-14));
  }
}

TEST_CASE("legacy SAV stalls away from the minimizer while modified SAV converges") {
  // Wrong-fixed-point demonstration: from theta0 = 3 at dt = 0.2 the legacy
  // splitting scheme (C_g = 0.05) is trapped with a sign-flipped auxiliary
  // variable; the modified scheme from the same state reaches the minimum.
  QuarticWell well;
  const LinearOperator op = LinearOperator::scaled_identity(1.0, 1);
  const double dt = 0.2;

  SavState legacy;
  legacy.theta = scalar(3.0);
  const double g0 = well.value(legacy.theta) - 0.5 * 9.0;
  legacy.r = std::sqrt(g0 + 0.05);
  legacy.dt = dt;
  for (int k = 0; k < 10000; ++k) legacy = legacy_sav_step(legacy, well, op, 0.05, dt).state;

  SavState modified = init_sav_state(well, scalar(3.0), dt);
  for (int k = 0; k < 10000; ++k) modified = modified_sav_step(modified, well, op, dt).state;

  CHECK(well.gradient(legacy.theta).norm() > 1e-3);
  CHECK(well.gradient(modified.theta).norm() < 1e-8);
}

TEST_CASE("legacy SAV rejects a violated splitting bound") {
  WeightedSquare sq = WeightedSquare::one_dim();
  const LinearOperator op = LinearOperator::scaled_identity(4.0, 1);
  SavState s;
  s.theta = scalar(1.0);
  s.r = 1.0;
  // g = f - 2 theta^2 = -1 at theta = 1; C_g = 0.5 leaves g + C_g < 0.
  CHECK_THROWS_AS(legacy_sav_step(s, sq, op, 0.5, 0.1), DomainError);
}

TEST_CASE("compute_xi: clamped, interior and degenerate cases") {
  // Negative root clamps to zero.
  CHECK(compute_xi(0.9, 1.0, 0.64, 0.99) == 0.0);

  // Interior root; cross-checked against the simplified closed form
  //   xi = (s - sqrt((1-eta) rt^2 + eta r^2 + (1-eta)(rt - r)^2)) / (s - rt).
  const double r_tilde = 0.9, r_k = 1.0, s = 1.1, eta = 0.99;
  const double xi = compute_xi(r_tilde, r_k, s * s, eta);
  const double inner =
      (1 - eta) * r_tilde * r_tilde + eta * r_k * r_k + (1 - eta) * (r_tilde - r_k) * (r_tilde - r_k);
  const double xi_simplified = (s - std::sqrt(inner)) / (s - r_tilde);
  CHECK(xi == doctest::Approx(xi_simplified).epsilon(1e-12));
  CHECK(xi == doctest::Approx(0.50451).epsilon(1e-4));

  // The relaxed r satisfies the dissipation equality when the root is taken.
  const double r_next = xi * r_tilde + (1 - xi) * s;
  const double g_form = -2.0 * (r_tilde - r_k) * r_tilde;  // = 0.18
  CHECK(g_form == doctest::Approx(0.18));
  CHECK(r_next * r_next - r_k * r_k == doctest::Approx(-(1 - eta) * g_form).epsilon(1e-12));
  CHECK(r_next == doctest::Approx(0.99910).epsilon(1e-4));

  // Degenerate a = 0: relaxation target coincides.
  CHECK(compute_xi(0.8, 1.0, 0.64, 0.99) == 0.0);
  CHECK_THROWS_AS(compute_xi(1.0, 1.0, -0.5, 0.99), DomainError);
}

TEST_CASE("rsav one-step regression on f = theta^2") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s = init_sav_state(sq, scalar(1.0), 1.0);
  const StepResult step = rsav_step(s, sq, LinearOperator::zero(1), RelaxParams{}, 1.0);
  // r-tilde = sqrt(2)/2, theta1 = 0, f(theta1)+C = 1; the admissibility root
  // is negative so xi clamps to 0 and r1 = 1.
  CHECK(step.trace.r_tilde == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(step.trace.xi == 0.0);
  CHECK(step.state.theta[0] == doctest::Approx(0.0));
  CHECK(step.state.r == doctest::Approx(1.0));
  CHECK(step.trace.g_form == doctest::Approx(1.0));  // direct G = |dtheta|^2/dt = 1
}

TEST_CASE("rsav dissipation inequality holds on a 500-step quadratic run") {
  QuadraticProblem quad;
  const RelaxParams relax;
  const LinearOperator op = LinearOperator::zero(quad.dimension());
  for (double dt : {0.1, 1.0, 10.0}) {
    SavState s = init_sav_state(quad, Vec::Ones(quad.dimension()), dt);
    for (int k = 0; k < 500; ++k) {
      const StepResult step = rsav_step(s, quad, op, relax, dt);
      const double g_dir = g_direct(s.theta, step.state.theta, op, dt);
      CHECK(step.state.r * step.state.r - s.r * s.r <= -(1.0 - relax.eta) * g_dir + 1e-12);
      s = step.state;
    }
  }
}

TEST_CASE("adaptive rule: grow on healthy indicator, shrink on a low one") {
  WeightedSquare sq = WeightedSquare::one_dim();
  AdaptiveParams adapt;
  adapt.dt_min = 1e-6;
  adapt.rho = 1.1;
  adapt.gamma = 0.9;
  const LinearOperator zero = LinearOperator::zero(1);

  // Fresh start: indicator 1 >= gamma, dt grows by rho.
  SavState healthy = init_sav_state(sq, scalar(1.0), 1.0);
  StepResult grown = adaptive_rsav_step(healthy, sq, zero, RelaxParams{}, adapt);
  CHECK(grown.trace.dt == doctest::Approx(1.1));
  CHECK(grown.trace.indicator == doctest::Approx(1.0));

  // Indicator 0.5 < gamma with dt above the floor: dt multiplies by it.
  SavState low = init_sav_state(sq, scalar(1.0), 1.0);
  low.aux_ratio = 0.5;
  StepResult shrunk = adaptive_rsav_step(low, sq, zero, RelaxParams{}, adapt);
  CHECK(shrunk.trace.dt == doctest::Approx(0.5));

  // At the floor the guard dt > dt_min fails and the else-branch grows.
  SavState floor = init_sav_state(sq, scalar(1.0), adapt.dt_min);
  floor.aux_ratio = 0.5;
  StepResult at_floor = adaptive_rsav_step(floor, sq, zero, RelaxParams{}, adapt);
  CHECK(at_floor.trace.dt == doctest::Approx(1.1 * adapt.dt_min));
}

TEST_CASE("thm0 identity holds along modified SAV trajectories") {
  RosenbrockProblem rosen(2);
  Vec start(2);
  start << -3.0, -4.0;
  for (double dt : {0.01, 1.0, 10.0}) {
    const LinearOperator op = LinearOperator::periodic_laplacian(1.0, 2);
    SavState s = init_sav_state(rosen, start, dt);
    for (int k = 0; k < 200; ++k) {
      const StepResult step = modified_sav_step(s, rosen, op, dt);
      const double fc = step.trace.f + rosen.shift_c();
      CHECK(thm0_residual(s.theta, s.r, step.state.theta, step.state.r, op, dt, fc) <= 1e-9);
      s = step.state;
    }
  }
}

TEST_CASE("modified energy is non-increasing for the SAV family") {
  QuadraticProblem quad;
  const LinearOperator op = LinearOperator::scaled_identity(0.5, quad.dimension());
  SavState s = init_sav_state(quad, Vec::Ones(quad.dimension()), 2.0);
  SavState r = s;
  for (int k = 0; k < 300; ++k) {
    const double s_prev = s.r * s.r;
    const double r_prev = r.r * r.r;
    s = modified_sav_step(s, quad, op, 2.0).state;
    r = rsav_step(r, quad, op, RelaxParams{}, 2.0).state;
    CHECK(s.r * s.r <= s_prev * (1 + 1e-15) + 1e-300);
    CHECK(r.r * r.r <= r_prev * (1 + 1e-15) + 1e-300);
  }
}

TEST_CASE("steppers report divergence instead of propagating non-finite values") {
  WeightedSquare sq = WeightedSquare::one_dim();
  SavState s;
  s.theta = scalar(std::numeric_limits<double>::infinity());
  s.r = 1.0;
  s.dt = 1.0;
  const StepResult step = savgd_step(s, sq, 1.0);
  CHECK(step.trace.status == Status::diverge);
  CHECK(step.state.theta == s.theta);  // state unchanged
}
