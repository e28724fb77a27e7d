#include "hamlearn/lq.hpp"

#include <cmath>

#include "hamlearn/errors.hpp"

namespace hamlearn {

void lq_hamilton_rhs(const LQProblem& prob, double x, double p, double& dx, double& dp) {
  const double s = prob.s_coef();
  dx = prob.a * x - s * p;
  dp = -prob.q * x - prob.a * p;
}

double riccati_rhs(double theta, const LQProblem& prob, bool flipped) {
  const double s = prob.s_coef();
  const double v = s * theta * theta + 2.0 * prob.a * theta + prob.q;
  return flipped ? -v : v;
}

RiccatiRoots algebraic_riccati_roots(const LQProblem& prob) {
  const double s = prob.s_coef();
  if (s == 0.0) throw DegenerateProblem("lq: b = 0 leaves no control authority");
  const double disc = prob.a * prob.a - s * prob.q;
  if (disc < 0.0) throw DegenerateProblem("lq: riccati equation has no real roots");
  const double sq = std::sqrt(disc);
  const double r1 = (-prob.a + sq) / s;
  const double r2 = (-prob.a - sq) / s;
  // The flipped flow is -(s theta^2 + 2 a theta + q); its derivative at a
  // root is -(2 s theta + 2 a), negative exactly at the attracting one.
  RiccatiRoots roots;
  const double slope1 = -(2.0 * s * r1 + 2.0 * prob.a);
  if (slope1 < 0.0) {
    roots.stable = r1;
    roots.unstable = r2;
  } else {
    roots.stable = r2;
    roots.unstable = r1;
  }
  return roots;
}

FlipCheckResult simultaneous_flip_check(const LQProblem& prob, double theta0,
                                        const IntegratorConfig& cfg) {
  cfg.validate();
  const double s = prob.s_coef();
  if (s == 0.0) throw DegenerateProblem("lq: b = 0 leaves no control authority");

  // Sign-corrected linear pair whose gain p/x obeys the flipped Riccati flow.
  auto pair_rhs = [&](double x, double p, double& dx, double& dp) {
    dx = prob.a * x + s * p;
    dp = -prob.q * x - prob.a * p;
  };

  FlipCheckResult res;
  res.pair_log.columns = {"t", "x", "p"};
  res.riccati_log.columns = {"t", "theta"};

  double x = 1.0, p = theta0;
  double theta = theta0;
  const int steps = cfg.steps();
  const double tau = cfg.tau;

  auto record = [&](double t) {
    res.pair_log.rows.push_back({t, x, p});
    res.riccati_log.rows.push_back({t, theta});
    if (std::abs(x) < 1e-9) {
      res.division_near_zero = true;
      return;
    }
    const double ratio = p / x;
    res.max_residual = std::max(res.max_residual, std::abs(ratio - theta));
    ++res.compared_rows;
  };

  record(0.0);

  for (int n = 0; n < steps; ++n) {
    if (cfg.scheme == IntegratorConfig::Scheme::Euler) {
      double dx, dp;
      pair_rhs(x, p, dx, dp);
      const double dth = riccati_rhs(theta, prob, /*flipped=*/true);
      x += tau * dx;
      p += tau * dp;
      theta += tau * dth;
    } else {
      double k1x, k1p, k2x, k2p, k3x, k3p, k4x, k4p;
      pair_rhs(x, p, k1x, k1p);
      pair_rhs(x + 0.5 * tau * k1x, p + 0.5 * tau * k1p, k2x, k2p);
      pair_rhs(x + 0.5 * tau * k2x, p + 0.5 * tau * k2p, k3x, k3p);
      pair_rhs(x + tau * k3x, p + tau * k3p, k4x, k4p);
      x += tau * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
      p += tau * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;

      const double r1 = riccati_rhs(theta, prob, true);
      const double r2 = riccati_rhs(theta + 0.5 * tau * r1, prob, true);
      const double r3 = riccati_rhs(theta + 0.5 * tau * r2, prob, true);
      const double r4 = riccati_rhs(theta + tau * r3, prob, true);
      theta += tau * (r1 + 2.0 * r2 + 2.0 * r3 + r4) / 6.0;
    }

    // The ratio p/x is invariant under joint rescaling, so shrink the pair
    // before it overflows.
    const double mag = std::max(std::abs(x), std::abs(p));
    if (mag > 1e6) {
      x /= mag;
      p /= mag;
    }
    if ((n + 1) % cfg.record_stride == 0) record((n + 1) * tau);
  }
  return res;
}

}  // namespace hamlearn
