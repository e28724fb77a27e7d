#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hamlearn/costate.hpp"
#include "hamlearn/integrator.hpp"

namespace hamlearn {

/// Control-affine problem with a quadratic control penalty:
///   xdot = drift(x, t) + B v,   cost = integral of rho(t) |v|^2 / 2 + state_cost(x, t).
/// The sweep only needs the drift Jacobian through its transpose-times-vector
/// action.
struct ControlProblem {
  int state_dim = 0;
  int control_dim = 0;
  std::function<void(double t, std::span<const double> x, std::span<double> out)> drift;
  std::vector<double> B;  // state_dim x control_dim, row-major, constant
  std::function<double(double t)> control_weight;
  std::function<double(double t, std::span<const double> x)> state_cost;
  std::function<void(double t, std::span<const double> x, std::span<double> out)> state_cost_grad;
  std::function<void(double t, std::span<const double> x, std::span<const double> p,
                     std::span<double> out)>
      drift_jac_transpose_times;
};

struct BvpConfig {
  double tau = 1e-3;
  double T = 1.0;
  int max_sweeps = 200;
  double tol = 1e-8;
  double gamma = 0.5;
};

struct BvpResult {
  bool converged = false;
  int sweeps = 0;
  double control_change = 0.0;
  std::vector<double> times;                   // grid, size M+1
  std::vector<std::vector<double>> state;      // per grid point
  std::vector<std::vector<double>> costate;    // per grid point
  std::vector<std::vector<double>> control;    // per grid point
  std::vector<double> objective_history;       // functional value per sweep
  TrajectoryLog to_log() const;
};

/// Forward-backward sweep: integrate the state forward under the current
/// control, the costate backward from p(T) = 0 along the stored trajectory
/// (time reversal), then relax the control toward -B^T p / rho with damping
/// gamma. The damping backs off (halves, retries the sweep) whenever the
/// objective increases, so the objective trace is non-increasing.
BvpResult bvp_sweep(const ControlProblem& problem, std::span<const double> x0,
                    const BvpConfig& cfg);

/// The network learning problem: state (x, w), control v = wdot, cost
/// (mc/2)|v|^2 phi + c(kV + L) phi. Reference minimizer for the forward
/// Cauchy schemes.
ControlProblem make_net_control_problem(const NetModel& model);

/// Convenience wrapper: sweep the network problem from (x0, w0).
BvpResult bvp_sweep_net(const NetModel& model, std::span<const double> x0,
                        std::span<const double> w0, const BvpConfig& cfg);

/// Scalar LQ problem xdot = a x + b v, cost (q x^2 + r v^2)/2.
ControlProblem make_lq_control_problem(double a, double b, double q, double r);

/// Weight-only problem of the forward blow-up example: wdot = v, cost
/// (m v^2/2 + w^2/2) e^{theta t}.
ControlProblem make_weight_only_problem(double m, double theta);

}  // namespace hamlearn
