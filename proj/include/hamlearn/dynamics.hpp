#pragma once

#include <span>
#include <vector>

#include "hamlearn/activation.hpp"
#include "hamlearn/graph.hpp"

namespace hamlearn {

/// Per-neuron velocity constants c_i, i over non-input vertices.
struct SpeedConstants {
  std::vector<double> c;  // size = state_size

  static SpeedConstants uniform(double value, int state_size) {
    return {std::vector<double>(state_size, value)};
  }

  double mean() const {
    double s = 0.0;
    for (double v : c) s += v;
    return s / static_cast<double>(c.size());
  }
};

/// Value a parent vertex contributes to an activation: the clamped input
/// channel for input vertices, the state component otherwise.
inline double vertex_value(const NetGraph& g, std::span<const double> x,
                           std::span<const double> u_t, int v) {
  return g.is_input(v) ? u_t[v] : x[g.state_index(v)];
}

/// a_i = sum over parents m of w_{im} * value(m). Vertex i is 0-based and
/// must be non-input.
double activation_pre(const NetGraph& g, std::span<const double> x,
                      std::span<const double> u_t, std::span<const double> w, int i);

/// All activations a_i for the non-input vertices, indexed by state index.
std::vector<double> activations(const NetGraph& g, std::span<const double> x,
                                std::span<const double> u_t, std::span<const double> w);

/// dx_i = c_i * (-x_i + sigma(a_i)).
std::vector<double> state_rhs(const NetGraph& g, const Activation& act,
                              std::span<const double> x, std::span<const double> u_t,
                              std::span<const double> w, const SpeedConstants& speed);

void state_rhs_into(const NetGraph& g, const Activation& act, std::span<const double> x,
                    std::span<const double> u_t, std::span<const double> w,
                    const SpeedConstants& speed, std::span<double> dx);

/// |x_i(0)| + sup|sigma| per non-input vertex; forward trajectories stay
/// below this for any bounded input and weights.
std::vector<double> bibo_bound(std::span<const double> x0, const Activation& act);

}  // namespace hamlearn
