#include <doctest.h>

#include <cmath>

#include "hamlearn/lq.hpp"
#include "hamlearn/oracles.hpp"

using namespace hamlearn;

TEST_CASE("scalar hamilton pair and riccati flow as written") {
  const LQProblem prob{2.0, 1.0, 3.0, 0.5, 20.0};
  CHECK(prob.s_coef() == doctest::Approx(-2.0));

  double dx = 0.0, dp = 0.0;
  lq_hamilton_rhs(prob, 1.5, -0.5, dx, dp);
  CHECK(dx == doctest::Approx(2.0 * 1.5 - (-2.0) * (-0.5)));
  CHECK(dp == doctest::Approx(-3.0 * 1.5 - 2.0 * (-0.5)));

  const double theta = 0.7;
  const double v = -2.0 * theta * theta + 2.0 * 2.0 * theta + 3.0;
  CHECK(riccati_rhs(theta, prob, false) == doctest::Approx(v));
  CHECK(riccati_rhs(theta, prob, true) == doctest::Approx(-v));
}

TEST_CASE("algebraic roots with stability classification") {
  // a=0, b=1, q=1, r=1: s=-1, roots of -theta^2 + 1 are +-1. The flipped
  // flow d(theta) = theta^2 - 1 attracts theta = -1 from below +1.
  const LQProblem prob{0.0, 1.0, 1.0, 1.0, 20.0};
  const auto roots = algebraic_riccati_roots(prob);
  CHECK(roots.stable == doctest::Approx(-1.0));
  CHECK(roots.unstable == doctest::Approx(1.0));

  // Flipped-flow derivative -(2 s theta + 2a) is negative at the stable root.
  const double slope = -(2.0 * prob.s_coef() * roots.stable + 2.0 * prob.a);
  CHECK(slope < 0.0);

  CHECK_THROWS_AS(algebraic_riccati_roots(LQProblem{0.0, 0.0, 1.0, 1.0, 20.0}),
                  DegenerateProblem);
}

TEST_CASE("pair ratio shadows the flipped riccati flow") {
  const LQProblem prob{-1.0, 1.0, 10.0, 0.1, 20.0};
  IntegratorConfig cfg;
  cfg.tau = 1e-4;
  cfg.T = 20.0;
  cfg.scheme = IntegratorConfig::Scheme::RK4;
  cfg.record_stride = 100;
  const auto res = simultaneous_flip_check(prob, 0.0, cfg);
  CHECK(res.compared_rows > 0);
  CHECK(res.max_residual <= 1e-5);
}

TEST_CASE("discrete backward recursion reproduces the stationary gain") {
  // Long horizon, a=0, b=1, q=r=1: stationary P=1, gain -> -1.
  const double gain = discrete_lq_gain(0.0, 1.0, 1.0, 1.0, 20.0, 1e-3);
  CHECK(gain == doctest::Approx(-1.0).epsilon(5e-3));
}
