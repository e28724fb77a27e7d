#pragma once

#include <span>
#include <vector>

#include "hamlearn/dynamics.hpp"
#include "hamlearn/signal.hpp"

namespace hamlearn {

/// Quadratic tracking loss on the output set plus the |w|^2/2 weight
/// regularizer, matching the l = kV + L split the local costate equations
/// require: the state part touches only output vertices.
struct LossSpec {
  double q = 1.0;        // accuracy gain on the tracking term
  VectorSignal target;   // one channel per output vertex, in output order

  /// L(x, t) = (q/2) * sum over outputs (x_o - y_o(t))^2.
  double state_loss(const NetGraph& g, std::span<const double> x, double t) const {
    double L = 0.0;
    for (std::size_t oi = 0; oi < g.outputs().size(); ++oi) {
      const double e = x[g.state_index(g.outputs()[oi])] - target.value(static_cast<int>(oi), t);
      L += 0.5 * q * e * e;
    }
    return L;
  }

  /// dL/dx into `grad` (state-indexed); zero off the output set.
  void state_loss_grad(const NetGraph& g, std::span<const double> x, double t,
                       std::span<double> grad) const {
    for (auto& v : grad) v = 0.0;
    for (std::size_t oi = 0; oi < g.outputs().size(); ++oi) {
      const int k = g.state_index(g.outputs()[oi]);
      grad[k] = q * (x[k] - target.value(static_cast<int>(oi), t));
    }
  }
};

inline double weight_regularizer(std::span<const double> w) {
  double V = 0.0;
  for (double v : w) V += 0.5 * v * v;
  return V;
}

/// Constants of the cost functional: kinetic mass m, regularizer gain k, the
/// exponent of phi(t) = exp(theta t), speeds, loss and horizon.
struct HamiltonianConfig {
  double m = 1.0;
  double k = 0.0;
  double theta = 0.0;
  SpeedConstants speed;
  LossSpec loss;
  double T = 1.0;

  double phi(double t) const { return std::exp(theta * t); }
};

/// Everything the costate right-hand sides need about one network.
struct NetModel {
  NetGraph graph;
  Activation act;
  VectorSignal input;  // dim = input_count
  HamiltonianConfig cfg;
};

/// H = -(1/phi) |p_w|^2 / (2mc) + c * l(w,x,t) * phi + p_x . f
double hamiltonian_value(const NetModel& model, std::span<const double> x,
                         std::span<const double> w, std::span<const double> p_x,
                         std::span<const double> p_w, double t);

/// The four Hamilton right-hand sides assembled from the dense Jacobians
/// f_xi, f_u of the vector field (general route, no graph-local shortcuts).
void hamilton_rhs_general(const NetModel& model, std::span<const double> x,
                          std::span<const double> w, std::span<const double> p_x,
                          std::span<const double> p_w, double t, std::span<double> dx,
                          std::span<double> dw, std::span<double> dp_x,
                          std::span<double> dp_w);

/// Spatially local form: each vertex reads only its parent/child
/// neighborhood. `flipped` negates the two costate lines (time-reversed
/// costate dynamics, the Cauchy-stable variant).
void hamilton_rhs_local(const NetModel& model, std::span<const double> x,
                        std::span<const double> w, std::span<const double> p_x,
                        std::span<const double> p_w, double t, bool flipped,
                        std::span<double> dx, std::span<double> dw, std::span<double> dp_x,
                        std::span<double> dp_w);

/// Mixed-order system in (x, w, wdot, lambda) with the rescaled costate
/// lambda_i = sigma'(a_i) p_x^i / phi. Throws SingularActivation when
/// |sigma'(a_i)| < 1e-12.
void lambda_rhs(const NetModel& model, std::span<const double> x, std::span<const double> w,
                std::span<const double> wdot, std::span<const double> lambda, double t,
                bool flipped, std::span<double> dx, std::span<double> dwdot,
                std::span<double> dlambda);

/// Map a costate vector through lambda_i = sigma'(a_i) p_x^i / phi(t).
std::vector<double> lambda_from_costate(const NetModel& model, std::span<const double> x,
                                        std::span<const double> w, std::span<const double> p_x,
                                        double t);

/// Infinite-speed algebraic limit: delta errors by reverse topological order
/// on the non-input subgraph. Requires that subgraph to be a DAG; x should be
/// self-consistent (x_i = sigma(a_i)).
std::vector<double> backprop_limit_lambda(const NetGraph& g, const Activation& act,
                                          std::span<const double> x, std::span<const double> u_t,
                                          std::span<const double> w, const LossSpec& loss,
                                          double t);

/// Reverse topological order of the non-input vertices (state indices);
/// throws NotDAG on a cycle.
std::vector<int> reverse_topological_order(const NetGraph& g);

}  // namespace hamlearn
