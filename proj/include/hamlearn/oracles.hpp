#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hamlearn/costate.hpp"

namespace hamlearn {

/// Central finite-difference gradient of a scalar function of a vector.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> at, double h = 1e-5);

/// Discrete-time dynamic programming for the scalar regulator: backward
/// Riccati recursion on the Euler-discretized problem, returning the initial
/// feedback gain v(0)/x(0). Independent of the continuous-time machinery.
double discrete_lq_gain(double a, double b, double q, double r, double T, double tau);

/// Equilibrium sensitivities of the frozen network at self-consistent x
/// (x_i = sigma(a_i)): delta_i = dL/dx_i holding the feedforward pass fixed,
/// computed by finite differences on the re-evaluated loss. Requires the
/// non-input subgraph to be a DAG (values are recomputed by forward
/// substitution after perturbing a single pre-activation).
std::vector<double> fd_backprop_delta(const NetGraph& g, const Activation& act,
                                      std::span<const double> u_t, std::span<const double> w,
                                      const LossSpec& loss, double t, double h = 1e-6);

/// Self-consistent state of a frozen DAG network: x_i = sigma(a_i) by
/// forward substitution in topological order.
std::vector<double> dag_forward_state(const NetGraph& g, const Activation& act,
                                      std::span<const double> u_t, std::span<const double> w);

/// Tracking cost of the frozen network (weights constant, no control):
/// J(x0) = sum over steps of tau * c * L(x_n, t_n) * phi(t_n), states by
/// forward Euler. Rectangle rule so the discrete adjoint below is its exact
/// gradient.
double frozen_net_objective(const NetModel& model, std::span<const double> x0,
                            std::span<const double> w, double tau, double T);

/// Exact gradient of frozen_net_objective with respect to x0, computed by the
/// reverse recursion of the Euler scheme (costate from p(T) = 0 backward).
std::vector<double> frozen_net_objective_grad(const NetModel& model, std::span<const double> x0,
                                              std::span<const double> w, double tau, double T);

/// Random structurally valid network: n in [3, max_n], at least one input,
/// every input wired somewhere, arbitrary recurrent arcs among the rest.
NetGraph random_legal_graph(std::uint64_t seed, int max_n);

}  // namespace hamlearn
