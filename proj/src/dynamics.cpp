#include "hamlearn/dynamics.hpp"

#include <cmath>
#include <string>

namespace hamlearn {

double activation_pre(const NetGraph& g, std::span<const double> x,
                      std::span<const double> u_t, std::span<const double> w, int i) {
  if (i < g.input_count() || i >= g.vertex_count()) {
    throw IndexError("activation_pre: vertex " + std::to_string(i + 1) +
                     " is not a non-input vertex");
  }
  double a = 0.0;
  for (int m : g.parents(i)) {
    a += w[g.arc_index(m, i)] * vertex_value(g, x, u_t, m);
  }
  return a;
}

std::vector<double> activations(const NetGraph& g, std::span<const double> x,
                                std::span<const double> u_t, std::span<const double> w) {
  std::vector<double> a(g.state_size());
  for (int i = g.input_count(); i < g.vertex_count(); ++i) {
    a[g.state_index(i)] = activation_pre(g, x, u_t, w, i);
  }
  return a;
}

void state_rhs_into(const NetGraph& g, const Activation& act, std::span<const double> x,
                    std::span<const double> u_t, std::span<const double> w,
                    const SpeedConstants& speed, std::span<double> dx) {
  for (int i = g.input_count(); i < g.vertex_count(); ++i) {
    const int k = g.state_index(i);
    const double a = activation_pre(g, x, u_t, w, i);
    dx[k] = speed.c[k] * (-x[k] + act(a));
  }
}

std::vector<double> state_rhs(const NetGraph& g, const Activation& act,
                              std::span<const double> x, std::span<const double> u_t,
                              std::span<const double> w, const SpeedConstants& speed) {
  std::vector<double> dx(g.state_size());
  state_rhs_into(g, act, x, u_t, w, speed, dx);
  return dx;
}

std::vector<double> bibo_bound(std::span<const double> x0, const Activation& act) {
  std::vector<double> b(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) b[i] = std::abs(x0[i]) + act.bound();
  return b;
}

}  // namespace hamlearn
