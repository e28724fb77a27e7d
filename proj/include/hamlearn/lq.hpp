#pragma once

#include "hamlearn/integrator.hpp"

namespace hamlearn {

/// Scalar linear-quadratic regulator: xdot = a x + b v, running cost
/// (q x^2 + r v^2)/2, infinite horizon analysed through the gain theta with
/// p = theta x.
struct LQProblem {
  double a = 0.0;
  double b = 1.0;
  double q = 1.0;
  double r = 1.0;
  double T = 20.0;

  /// s = -b^2 / r, the coefficient of theta^2 in the Riccati flow.
  double s_coef() const { return -b * b / r; }
};

/// The linear Hamiltonian pair for the gain analysis:
///   xdot = a x - s p,  pdot = -q x - a p,  with s = -b^2/r.
void lq_hamilton_rhs(const LQProblem& prob, double x, double p, double& dx, double& dp);

/// Scalar Riccati flow for theta = p / x. Unflipped: s theta^2 + 2 a theta + q.
/// `flipped` negates it (the variant that runs stably forward in time).
double riccati_rhs(double theta, const LQProblem& prob, bool flipped);

struct RiccatiRoots {
  double stable = 0.0;    // attracting fixed point of the flipped flow
  double unstable = 0.0;  // repelling fixed point
};

/// Roots of s theta^2 + 2 a theta + q = 0, classified by the sign of the
/// flipped flow's derivative at each root. Throws DegenerateProblem when
/// b = 0 (no control authority) or the roots are not real.
RiccatiRoots algebraic_riccati_roots(const LQProblem& prob);

struct FlipCheckResult {
  double max_residual = 0.0;   // max |theta_pair - theta_riccati| over the grid
  bool division_near_zero = false;
  int compared_rows = 0;
  TrajectoryLog pair_log;      // columns t, x, p
  TrajectoryLog riccati_log;   // columns t, theta
};

/// Integrates the sign-corrected linear pair
///   xdot = a x + s p,  pdot = -q x - a p
/// alongside the flipped Riccati flow and compares theta = p/x pointwise.
/// The pair is renormalized whenever |(x,p)| grows past 1e6 (the ratio is
/// invariant); rows with |x| < 1e-9 set the division flag and are skipped.
FlipCheckResult simultaneous_flip_check(const LQProblem& prob, double theta0,
                                        const IntegratorConfig& cfg);

}  // namespace hamlearn
