#include "hamlearn/costate.hpp"

#include <cmath>
#include <string>

namespace hamlearn {

namespace {

struct Evaluated {
  std::vector<double> u;       // input channels at t
  std::vector<double> a;       // activations, state-indexed
  std::vector<double> sig1;    // sigma'(a_i)
  std::vector<double> f;       // state rhs
};

Evaluated evaluate(const NetModel& model, std::span<const double> x,
                   std::span<const double> w, double t) {
  Evaluated ev;
  ev.u = model.input.values(t);
  ev.a = activations(model.graph, x, ev.u, w);
  ev.sig1.resize(ev.a.size());
  for (std::size_t i = 0; i < ev.a.size(); ++i) ev.sig1[i] = model.act.d1(ev.a[i]);
  ev.f.resize(model.graph.state_size());
  const auto& g = model.graph;
  for (int v = g.input_count(); v < g.vertex_count(); ++v) {
    const int i = g.state_index(v);
    ev.f[i] = model.cfg.speed.c[i] * (-x[i] + model.act(ev.a[i]));
  }
  return ev;
}

}  // namespace

double hamiltonian_value(const NetModel& model, std::span<const double> x,
                         std::span<const double> w, std::span<const double> p_x,
                         std::span<const double> p_w, double t) {
  const auto& cfg = model.cfg;
  const double c = cfg.speed.mean();
  const double phi = cfg.phi(t);
  const Evaluated ev = evaluate(model, x, w, t);

  double pw2 = 0.0;
  for (double v : p_w) pw2 += v * v;
  double pf = 0.0;
  for (std::size_t i = 0; i < ev.f.size(); ++i) pf += p_x[i] * ev.f[i];
  const double ell = cfg.k * weight_regularizer(w) + cfg.loss.state_loss(model.graph, x, t);

  return -pw2 / (2.0 * cfg.m * c * phi) + c * ell * phi + pf;
}

void hamilton_rhs_general(const NetModel& model, std::span<const double> x,
                          std::span<const double> w, std::span<const double> p_x,
                          std::span<const double> p_w, double t, std::span<double> dx,
                          std::span<double> dw, std::span<double> dp_x,
                          std::span<double> dp_w) {
  const auto& g = model.graph;
  const auto& cfg = model.cfg;
  const int ns = g.state_size();
  const int nw = g.weight_count();
  const double c = cfg.speed.mean();
  const double phi = cfg.phi(t);
  const Evaluated ev = evaluate(model, x, w, t);

  // Dense Jacobians of f, assembled from the Kronecker-delta expansion.
  std::vector<double> f_xi(static_cast<std::size_t>(ns) * ns, 0.0);   // row k, col i
  std::vector<double> f_u(static_cast<std::size_t>(ns) * nw, 0.0);    // row k, col arc
  for (int vk = g.input_count(); vk < g.vertex_count(); ++vk) {
    const int k = g.state_index(vk);
    const double ck = cfg.speed.c[k];
    f_xi[static_cast<std::size_t>(k) * ns + k] -= ck;
    for (int vm : g.parents(vk)) {
      const int e = g.arc_index(vm, vk);
      f_u[static_cast<std::size_t>(k) * nw + e] = ck * ev.sig1[k] * vertex_value(g, x, ev.u, vm);
      if (!g.is_input(vm)) {
        f_xi[static_cast<std::size_t>(k) * ns + g.state_index(vm)] += ck * ev.sig1[k] * w[e];
      }
    }
  }

  std::vector<double> l_xi(ns);
  cfg.loss.state_loss_grad(g, x, t, l_xi);

  for (int i = 0; i < ns; ++i) dx[i] = ev.f[i];
  for (int e = 0; e < nw; ++e) dw[e] = -p_w[e] / (cfg.m * c * phi);
  for (int i = 0; i < ns; ++i) {
    double acc = 0.0;
    for (int k = 0; k < ns; ++k) acc += p_x[k] * f_xi[static_cast<std::size_t>(k) * ns + i];
    dp_x[i] = -acc - c * l_xi[i] * phi;
  }
  for (int e = 0; e < nw; ++e) {
    double acc = 0.0;
    for (int k = 0; k < ns; ++k) acc += p_x[k] * f_u[static_cast<std::size_t>(k) * nw + e];
    dp_w[e] = -acc - c * cfg.k * w[e] * phi;
  }
}

void hamilton_rhs_local(const NetModel& model, std::span<const double> x,
                        std::span<const double> w, std::span<const double> p_x,
                        std::span<const double> p_w, double t, bool flipped,
                        std::span<double> dx, std::span<double> dw, std::span<double> dp_x,
                        std::span<double> dp_w) {
  const auto& g = model.graph;
  const auto& cfg = model.cfg;
  const double c = cfg.speed.mean();
  const double phi = cfg.phi(t);
  const double sign = flipped ? -1.0 : 1.0;
  const Evaluated ev = evaluate(model, x, w, t);

  std::vector<double> l_xi(g.state_size());
  cfg.loss.state_loss_grad(g, x, t, l_xi);

  for (int i = 0; i < g.state_size(); ++i) dx[i] = ev.f[i];
  for (int e = 0; e < g.weight_count(); ++e) dw[e] = -p_w[e] / (cfg.m * c * phi);

  for (int vi = g.input_count(); vi < g.vertex_count(); ++vi) {
    const int i = g.state_index(vi);
    double child_sum = 0.0;
    for (int vk : g.children(vi)) {
      const int k = g.state_index(vk);
      child_sum += cfg.speed.c[k] * ev.sig1[k] * p_x[k] * w[g.arc_index(vi, vk)];
    }
    dp_x[i] = sign * (cfg.speed.c[i] * p_x[i] - child_sum - c * l_xi[i] * phi);

    for (int vj : g.parents(vi)) {
      const int e = g.arc_index(vj, vi);
      dp_w[e] = sign * (-cfg.speed.c[i] * p_x[i] * ev.sig1[i] * vertex_value(g, x, ev.u, vj) -
                        c * cfg.k * w[e] * phi);
    }
  }
}

void lambda_rhs(const NetModel& model, std::span<const double> x, std::span<const double> w,
                std::span<const double> wdot, std::span<const double> lambda, double t,
                bool flipped, std::span<double> dx, std::span<double> dwdot,
                std::span<double> dlambda) {
  const auto& g = model.graph;
  const auto& cfg = model.cfg;
  const double c = cfg.speed.mean();
  const double sign = flipped ? -1.0 : 1.0;
  const Evaluated ev = evaluate(model, x, w, t);

  for (std::size_t i = 0; i < ev.sig1.size(); ++i) {
    if (std::abs(ev.sig1[i]) < 1e-12) {
      throw SingularActivation("sigma'(a_" + std::to_string(g.state_vertex(static_cast<int>(i)) + 1) +
                               ") below 1e-12; rescaled costate is degenerate");
    }
  }

  std::vector<double> l_xi(g.state_size());
  cfg.loss.state_loss_grad(g, x, t, l_xi);

  for (int i = 0; i < g.state_size(); ++i) dx[i] = ev.f[i];

  // d a_i / dt, assembled from wdot and the time derivatives of the parent
  // values (state rhs for hidden parents, du/dt for clamped inputs).
  std::vector<double> adot(g.state_size(), 0.0);
  for (int vi = g.input_count(); vi < g.vertex_count(); ++vi) {
    const int i = g.state_index(vi);
    double s = 0.0;
    for (int vm : g.parents(vi)) {
      const int e = g.arc_index(vm, vi);
      const double val = vertex_value(g, x, ev.u, vm);
      const double valdot = g.is_input(vm) ? model.input.deriv(vm, t) : ev.f[g.state_index(vm)];
      s += wdot[e] * val + w[e] * valdot;
    }
    adot[i] = s;
  }

  for (int vi = g.input_count(); vi < g.vertex_count(); ++vi) {
    const int i = g.state_index(vi);
    const double ci = cfg.speed.c[i];

    for (int vj : g.parents(vi)) {
      const int e = g.arc_index(vj, vi);
      dwdot[e] = -cfg.theta * wdot[e] +
                 sign * (ci / (cfg.m * c) * lambda[i] * vertex_value(g, x, ev.u, vj) +
                         cfg.k / cfg.m * w[e]);
    }

    const double dlog = model.act.d2(ev.a[i]) * adot[i] / ev.sig1[i];
    double child_sum = 0.0;
    for (int vk : g.children(vi)) {
      const int k = g.state_index(vk);
      child_sum += cfg.speed.c[k] * lambda[k] * w[g.arc_index(vi, vk)];
    }
    dlambda[i] = (-cfg.theta + dlog + sign * ci) * lambda[i] +
                 sign * (-ev.sig1[i] * child_sum - c * l_xi[i] * ev.sig1[i]);
  }
}

std::vector<double> lambda_from_costate(const NetModel& model, std::span<const double> x,
                                        std::span<const double> w, std::span<const double> p_x,
                                        double t) {
  const Evaluated ev = evaluate(model, x, w, t);
  const double phi = model.cfg.phi(t);
  std::vector<double> lambda(p_x.size());
  for (std::size_t i = 0; i < p_x.size(); ++i) lambda[i] = ev.sig1[i] / phi * p_x[i];
  return lambda;
}

std::vector<int> reverse_topological_order(const NetGraph& g) {
  const int d = g.input_count();
  const int ns = g.state_size();
  // Kahn's algorithm on the non-input subgraph, sinks first.
  std::vector<int> out_degree(ns, 0);
  for (int v = d; v < g.vertex_count(); ++v) {
    for (int k : g.children(v)) {
      if (!g.is_input(k)) ++out_degree[g.state_index(v)];
    }
  }
  std::vector<int> order;
  std::vector<int> frontier;
  for (int i = 0; i < ns; ++i) {
    if (out_degree[i] == 0) frontier.push_back(i);
  }
  while (!frontier.empty()) {
    const int i = frontier.back();
    frontier.pop_back();
    order.push_back(i);
    for (int vm : g.parents(g.state_vertex(i))) {
      if (g.is_input(vm)) continue;
      if (--out_degree[g.state_index(vm)] == 0) frontier.push_back(g.state_index(vm));
    }
  }
  if (static_cast<int>(order.size()) != ns) {
    throw NotDAG("non-input subgraph has a cycle; the algebraic delta system is not triangular");
  }
  return order;
}

std::vector<double> backprop_limit_lambda(const NetGraph& g, const Activation& act,
                                          std::span<const double> x, std::span<const double> u_t,
                                          std::span<const double> w, const LossSpec& loss,
                                          double t) {
  const std::vector<int> order = reverse_topological_order(g);

  std::vector<double> l_xi(g.state_size());
  loss.state_loss_grad(g, x, t, l_xi);

  std::vector<double> lambda(g.state_size(), 0.0);
  for (int i : order) {
    const int vi = g.state_vertex(i);
    const double s1 = act.d1(activation_pre(g, x, u_t, w, vi));
    double child_sum = 0.0;
    for (int vk : g.children(vi)) {
      child_sum += lambda[g.state_index(vk)] * w[g.arc_index(vi, vk)];
    }
    lambda[i] = s1 * child_sum + l_xi[i] * s1;
  }
  return lambda;
}

}  // namespace hamlearn
