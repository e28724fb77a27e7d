#include "hamlearn/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace hamlearn {

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> at, double h) {
  std::vector<double> x(at.begin(), at.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double dn = f(x);
    x[i] = keep;
    grad[i] = (up - dn) / (2.0 * h);
  }
  return grad;
}

double discrete_lq_gain(double a, double b, double q, double r, double T, double tau) {
  const int N = static_cast<int>(std::floor(T / tau + 0.5));
  const double A = 1.0 + a * tau;
  const double B = b * tau;
  const double Q = q * tau;
  const double R = r * tau;
  double P = 0.0;
  double K = 0.0;
  for (int n = N - 1; n >= 0; --n) {
    K = -(A * P * B) / (R + B * B * P);
    P = Q + A * A * P - (A * P * B) * (A * P * B) / (R + B * B * P);
  }
  return K;
}

std::vector<double> dag_forward_state(const NetGraph& g, const Activation& act,
                                      std::span<const double> u_t, std::span<const double> w) {
  auto order = reverse_topological_order(g);
  std::reverse(order.begin(), order.end());
  std::vector<double> x(g.state_size(), 0.0);
  for (int i : order) {
    x[i] = act(activation_pre(g, x, u_t, w, g.state_vertex(i)));
  }
  return x;
}

std::vector<double> fd_backprop_delta(const NetGraph& g, const Activation& act,
                                      std::span<const double> u_t, std::span<const double> w,
                                      const LossSpec& loss, double t, double h) {
  auto order = reverse_topological_order(g);
  std::reverse(order.begin(), order.end());
  const auto base = dag_forward_state(g, act, u_t, w);
  const auto a_base = activations(g, base, u_t, w);

  // Total loss as a function of one free component x_i, every vertex strictly
  // downstream re-solved to its self-consistent value.
  auto loss_with = [&](int i, double xi) {
    std::vector<double> x = base;
    x[i] = xi;
    for (int k : order) {
      if (k == i) continue;
      x[k] = act(activation_pre(g, x, u_t, w, g.state_vertex(k)));
    }
    return loss.state_loss(g, x, t);
  };

  std::vector<double> delta(g.state_size());
  for (int i = 0; i < g.state_size(); ++i) {
    const double grad = (loss_with(i, base[i] + h) - loss_with(i, base[i] - h)) / (2.0 * h);
    delta[i] = act.d1(a_base[i]) * grad;
  }
  return delta;
}

namespace {

std::vector<std::vector<double>> frozen_forward(const NetModel& model, std::span<const double> x0,
                                                std::span<const double> w, double tau, int M) {
  std::vector<std::vector<double>> xs(M + 1, std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> dx(model.graph.state_size());
  for (int n = 0; n < M; ++n) {
    const double t = n * tau;
    const auto u = model.input.values(t);
    state_rhs_into(model.graph, model.act, xs[n], u, w, model.cfg.speed, dx);
    for (std::size_t i = 0; i < dx.size(); ++i) xs[n + 1][i] = xs[n][i] + tau * dx[i];
  }
  return xs;
}

}  // namespace

double frozen_net_objective(const NetModel& model, std::span<const double> x0,
                            std::span<const double> w, double tau, double T) {
  const int M = static_cast<int>(std::floor(T / tau + 0.5));
  const auto xs = frozen_forward(model, x0, w, tau, M);
  const double c = model.cfg.speed.mean();
  double J = 0.0;
  for (int n = 0; n < M; ++n) {
    const double t = n * tau;
    J += tau * c * model.cfg.loss.state_loss(model.graph, xs[n], t) * model.cfg.phi(t);
  }
  return J;
}

std::vector<double> frozen_net_objective_grad(const NetModel& model, std::span<const double> x0,
                                              std::span<const double> w, double tau, double T) {
  const auto& g = model.graph;
  const int ns = g.state_size();
  const int M = static_cast<int>(std::floor(T / tau + 0.5));
  const auto xs = frozen_forward(model, x0, w, tau, M);
  const double c = model.cfg.speed.mean();

  // p_n = dJ/dx_n: p_M = 0, p_n = (I + tau df/dx(x_n, t_n))^T p_{n+1}
  //                             + tau c L_x(x_n, t_n) phi(t_n).
  std::vector<double> p(ns, 0.0), pn(ns), l_xi(ns);
  for (int n = M - 1; n >= 0; --n) {
    const double t = n * tau;
    const auto u = model.input.values(t);
    const auto a = activations(g, xs[n], u, w);
    for (int i = 0; i < ns; ++i) {
      double jt = -model.cfg.speed.c[i] * p[i];
      const int vi = g.state_vertex(i);
      for (int vk : g.children(vi)) {
        const int k = g.state_index(vk);
        jt += model.cfg.speed.c[k] * model.act.d1(a[k]) * w[g.arc_index(vi, vk)] * p[k];
      }
      pn[i] = p[i] + tau * jt;
    }
    model.cfg.loss.state_loss_grad(g, xs[n], t, l_xi);
    for (int i = 0; i < ns; ++i) pn[i] += tau * c * l_xi[i] * model.cfg.phi(t);
    p = pn;
  }
  return p;
}

NetGraph random_legal_graph(std::uint64_t seed, int max_n) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int n = pick(3, max_n);
  const int d = pick(1, n - 2);

  std::vector<std::pair<int, int>> arcs;  // 1-based
  // Every input feeds one random non-input vertex, every non-input vertex has
  // at least one parent.
  for (int v = 1; v <= d; ++v) arcs.emplace_back(v, pick(d + 1, n));
  for (int v = d + 1; v <= n; ++v) arcs.emplace_back(pick(1, n), v);
  // A handful of extra arcs, duplicates skipped.
  const int extra = pick(0, 2 * n);
  for (int e = 0; e < extra; ++e) {
    const int from = pick(1, n);
    const int to = pick(d + 1, n);
    if (std::find(arcs.begin(), arcs.end(), std::pair{from, to}) == arcs.end()) {
      arcs.emplace_back(from, to);
    }
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  std::vector<int> outputs;
  for (int v = d + 1; v <= n; ++v) {
    if (outputs.empty() || rng() % 3 == 0) outputs.push_back(v);
  }
  return NetGraph::build(n, d, arcs, outputs);
}

}  // namespace hamlearn
