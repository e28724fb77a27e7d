#include "hamlearn/verify.hpp"

#include <cmath>
#include <random>

#include "hamlearn/experiment.hpp"
#include "hamlearn/lq.hpp"
#include "hamlearn/oracles.hpp"

namespace hamlearn {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

NetModel random_model(std::mt19937_64& rng, const NetGraph& g) {
  NetModel model{g, Activation{},
                 VectorSignal::broadcast(ScalarSignal::sinusoid(0.7, 0.3), g.input_count()),
                 HamiltonianConfig{}};
  model.cfg.m = uniform(rng, 0.5, 2.0);
  model.cfg.k = uniform(rng, 0.0, 1.0);
  model.cfg.theta = uniform(rng, 0.0, 1.0);
  model.cfg.loss.q = uniform(rng, 0.5, 2.0);
  model.cfg.loss.target = VectorSignal::broadcast(ScalarSignal::sinusoid(0.5, 0.2),
                                                  static_cast<int>(g.outputs().size()));
  model.cfg.speed.c.resize(g.state_size());
  for (auto& c : model.cfg.speed.c) c = uniform(rng, 0.5, 2.0);
  return model;
}

std::vector<double> random_vec(std::mt19937_64& rng, int n, double range) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -range, range);
  return v;
}

std::vector<Check> suite_equivalence(std::uint64_t seed) {
  std::vector<Check> checks;
  double worst = 0.0;
  bool sums_ok = true;
  for (int trial = 0; trial < 25; ++trial) {
    const NetGraph g = random_legal_graph(seed * 1000 + trial, 8);
    sums_ok = sums_ok && switch_sums_check(g);
    std::mt19937_64 rng(seed * 1000 + trial + 7);
    NetModel model = random_model(rng, g);
    const int ns = g.state_size(), nw = g.weight_count();
    const auto x = random_vec(rng, ns, 1.0);
    const auto w = random_vec(rng, nw, 1.0);
    const auto px = random_vec(rng, ns, 1.0);
    const auto pw = random_vec(rng, nw, 1.0);
    const double t = uniform(rng, 0.0, 2.0);

    std::vector<double> dx1(ns), dw1(nw), dpx1(ns), dpw1(nw);
    std::vector<double> dx2(ns), dw2(nw), dpx2(ns), dpw2(nw);
    hamilton_rhs_general(model, x, w, px, pw, t, dx1, dw1, dpx1, dpw1);
    hamilton_rhs_local(model, x, w, px, pw, t, false, dx2, dw2, dpx2, dpw2);
    for (int i = 0; i < ns; ++i) {
      worst = std::max({worst, std::abs(dx1[i] - dx2[i]), std::abs(dpx1[i] - dpx2[i])});
    }
    for (int e = 0; e < nw; ++e) {
      worst = std::max({worst, std::abs(dw1[e] - dw2[e]), std::abs(dpw1[e] - dpw2[e])});
    }
  }
  checks.push_back({"general_vs_local_rhs", worst <= 1e-12, worst,
                    "max component deviation over 25 random networks"});
  checks.push_back({"switch_sums", sums_ok, sums_ok ? 0.0 : 1.0,
                    "arc sets agree when enumerated by parents and by children"});
  return checks;
}

std::vector<Check> suite_backprop_limit(std::uint64_t seed) {
  std::vector<Check> checks;
  // Layered feedforward net: 1 input, 3+3 hidden, 1 output (vertices 1-based).
  std::vector<std::pair<int, int>> arcs;
  for (int h = 2; h <= 4; ++h) arcs.emplace_back(1, h);
  for (int h = 2; h <= 4; ++h) {
    for (int k = 5; k <= 7; ++k) arcs.emplace_back(h, k);
  }
  for (int k = 5; k <= 7; ++k) arcs.emplace_back(k, 8);
  const NetGraph g = NetGraph::build(8, 1, arcs, {8});

  std::mt19937_64 rng(seed);
  const auto w = random_vec(rng, g.weight_count(), 1.2);
  const std::vector<double> u = {0.6};
  LossSpec loss{1.7, VectorSignal::broadcast(ScalarSignal::constant(0.25), 1)};
  const Activation act;
  const auto x = dag_forward_state(g, act, u, w);

  const auto fast = backprop_limit_lambda(g, act, x, u, w, loss, 0.0);
  const auto slow = fd_backprop_delta(g, act, u, w, loss, 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
  checks.push_back({"backprop_vs_fd", worst <= 1e-7, worst,
                    "reverse-order deltas vs finite differences on a layered net"});
  return checks;
}

std::vector<Check> suite_riccati(std::uint64_t) {
  std::vector<Check> checks;
  double worst_root = 0.0, worst_pair = 0.0;
  for (double a : {-1.0, 0.0, 1.0}) {
    for (double q : {1.0, 10.0}) {
      LQProblem prob{a, 1.0, q, 1.0, 20.0};
      const auto roots = algebraic_riccati_roots(prob);
      double theta = 0.0;
      const double tau = 1e-3;
      for (int n = 0; n < 20000; ++n) {
        const double r1 = riccati_rhs(theta, prob, true);
        const double r2 = riccati_rhs(theta + 0.5 * tau * r1, prob, true);
        const double r3 = riccati_rhs(theta + 0.5 * tau * r2, prob, true);
        const double r4 = riccati_rhs(theta + tau * r3, prob, true);
        theta += tau * (r1 + 2.0 * r2 + 2.0 * r3 + r4) / 6.0;
      }
      worst_root = std::max(worst_root, std::abs(theta - roots.stable));

      IntegratorConfig cfg;
      cfg.tau = 1e-4;
      cfg.T = 20.0;
      cfg.scheme = IntegratorConfig::Scheme::RK4;
      cfg.record_stride = 100;
      const auto flip = simultaneous_flip_check(prob, 0.0, cfg);
      worst_pair = std::max(worst_pair, flip.max_residual);
    }
  }
  checks.push_back({"flipped_flow_reaches_stable_root", worst_root <= 1e-6, worst_root,
                    "integrated gain vs algebraic root over a 6-point grid"});
  checks.push_back({"pair_ratio_matches_riccati", worst_pair <= 1e-5, worst_pair,
                    "p/x of the linear pair vs the flipped scalar flow"});
  return checks;
}

std::vector<Check> suite_bibo(std::uint64_t seed) {
  std::vector<Check> checks;
  double worst_margin = -1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const NetGraph g = random_legal_graph(seed * 77 + trial, 8);
    std::mt19937_64 rng(seed * 77 + trial + 3);
    NetModel model = random_model(rng, g);
    const auto w = random_vec(rng, g.weight_count(), 2.0);
    const auto x0 = random_vec(rng, g.state_size(), 1.0);
    const auto bound = bibo_bound(x0, model.act);

    std::vector<double> x = x0, dx(x0.size());
    const double tau = 1e-2;
    for (int n = 0; n < 2000; ++n) {
      const auto u = model.input.values(n * tau);
      state_rhs_into(g, model.act, x, u, w, model.cfg.speed, dx);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += tau * dx[i];
        worst_margin = std::max(worst_margin, std::abs(x[i]) - (bound[i] + 0.05));
      }
    }
  }
  checks.push_back({"state_within_bibo_bound", worst_margin <= 0.0, worst_margin,
                    "max overshoot of |x_i| past |x_i(0)| + sup|sigma| + margin"});
  return checks;
}

std::vector<Check> suite_blowup(std::uint64_t seed) {
  std::vector<Check> checks;
  std::mt19937_64 rng(seed);
  bool all_grew = true;
  double least_peak = 1e300;
  for (int trial = 0; trial < 10; ++trial) {
    // Scalar weight/costate pair of the pure-regularizer problem; the plain
    // forward Hamilton flow has an exponentially unstable mode.
    const double theta = 1.0, m = 1.0;
    double w = uniform(rng, -0.5, 0.5);
    double pw = (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.5, 2.0);
    const double tau = 1e-3;
    double peak = 0.0;
    for (int n = 0; n < 20000; ++n) {
      const double t = n * tau;
      const double dw = -pw * std::exp(-theta * t) / m;
      const double dpw = -w * std::exp(theta * t);
      w += tau * dw;
      pw += tau * dpw;
      peak = std::max({peak, std::abs(w), std::abs(pw)});
      if (peak > 1e6) break;
    }
    least_peak = std::min(least_peak, peak);
    all_grew = all_grew && peak > 1e6;
  }
  checks.push_back({"forward_costate_flow_blows_up", all_grew, least_peak,
                    "smallest peak magnitude over 10 random starts (want > 1e6)"});
  return checks;
}

std::vector<Check> suite_adjoint(std::uint64_t seed) {
  std::vector<Check> checks;
  const NetGraph g = NetGraph::fully_connected(3, 1);
  std::mt19937_64 rng(seed + 11);
  NetModel model = random_model(rng, g);
  const auto w = random_vec(rng, g.weight_count(), 0.8);
  const auto x0 = random_vec(rng, g.state_size(), 0.5);
  const double tau = 1e-3, T = 1.0;

  const auto grad = frozen_net_objective_grad(model, x0, w, tau, T);
  const auto fd = fd_gradient(
      [&](std::span<const double> x) { return frozen_net_objective(model, x, w, tau, T); }, x0,
      1e-5);
  double worst = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) worst = std::max(worst, std::abs(grad[i] - fd[i]));
  checks.push_back({"adjoint_vs_fd_gradient", worst <= 1e-6, worst,
                    "reverse-pass gradient of the tracking cost vs finite differences"});
  return checks;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"equivalence", "backprop-limit", "riccati", "bibo", "blowup", "adjoint"};
}

std::vector<Check> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "equivalence") return suite_equivalence(seed);
  if (suite == "backprop-limit" || suite == "backprop_limit") return suite_backprop_limit(seed);
  if (suite == "riccati") return suite_riccati(seed);
  if (suite == "bibo") return suite_bibo(seed);
  if (suite == "blowup") return suite_blowup(seed);
  if (suite == "adjoint") return suite_adjoint(seed);
  throw ConfigError("unknown verify suite '" + suite + "'");
}

}  // namespace hamlearn
