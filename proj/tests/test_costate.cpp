#include <doctest.h>

#include <cmath>
#include <random>

#include "hamlearn/costate.hpp"
#include "hamlearn/integrator.hpp"
#include "hamlearn/oracles.hpp"

using namespace hamlearn;

namespace {

NetModel tiny_model() {
  // 1 -> 2 -> 3 with a 3 -> 2 feedback arc.
  NetGraph g = NetGraph::build(3, 1, {{1, 2}, {2, 3}, {3, 2}}, {3});
  NetModel model{std::move(g), Activation{},
                 VectorSignal::broadcast(ScalarSignal::constant(0.6), 1), HamiltonianConfig{}};
  model.cfg.m = 0.7;
  model.cfg.k = 0.4;
  model.cfg.theta = 0.3;
  model.cfg.speed = SpeedConstants{{1.5, 0.8}};
  model.cfg.loss.q = 2.0;
  model.cfg.loss.target = VectorSignal::broadcast(ScalarSignal::constant(0.25), 1);
  return model;
}

std::vector<double> rand_vec(std::mt19937_64& rng, int n, double range) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0) * range;
  }
  return v;
}

}  // namespace

TEST_CASE("hamiltonian value against a hand computation") {
  const NetModel model = tiny_model();
  const std::vector<double> x = {0.2, -0.4};
  // Flat order: w_12, w_32, w_23.
  const std::vector<double> w = {0.5, -0.3, 1.1};
  const std::vector<double> p_x = {0.9, -0.2};
  const std::vector<double> p_w = {0.1, 0.6, -0.7};
  const double t = 0.5;

  const double c = (1.5 + 0.8) / 2.0;
  const double phi = std::exp(0.3 * t);
  const double a2 = 0.5 * 0.6 + (-0.3) * (-0.4);
  const double a3 = 1.1 * 0.2;
  const double f2 = 1.5 * (-0.2 + std::tanh(a2));
  const double f3 = 0.8 * (0.4 + std::tanh(a3));
  const double V = 0.5 * (0.25 + 0.09 + 1.21);
  const double L = 0.5 * 2.0 * (-0.4 - 0.25) * (-0.4 - 0.25);
  const double pw2 = 0.01 + 0.36 + 0.49;
  const double expected = -pw2 / (2.0 * 0.7 * c * phi) + c * (0.4 * V + L) * phi +
                          0.9 * f2 + (-0.2) * f3;

  CHECK(hamiltonian_value(model, x, w, p_x, p_w, t) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("general and local right-hand sides agree; flip negates the costate lines") {
  std::mt19937_64 rng(42);
  const NetModel model = tiny_model();
  const int ns = 2, nw = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = rand_vec(rng, ns, 1.0);
    const auto w = rand_vec(rng, nw, 1.0);
    const auto px = rand_vec(rng, ns, 1.0);
    const auto pw = rand_vec(rng, nw, 1.0);
    const double t = trial * 0.1;

    std::vector<double> dx1(ns), dw1(nw), dpx1(ns), dpw1(nw);
    std::vector<double> dx2(ns), dw2(nw), dpx2(ns), dpw2(nw);
    hamilton_rhs_general(model, x, w, px, pw, t, dx1, dw1, dpx1, dpw1);
    hamilton_rhs_local(model, x, w, px, pw, t, false, dx2, dw2, dpx2, dpw2);
    for (int i = 0; i < ns; ++i) {
      CHECK(dx1[i] == doctest::Approx(dx2[i]).epsilon(1e-13));
      CHECK(dpx1[i] == doctest::Approx(dpx2[i]).epsilon(1e-13));
    }
    for (int e = 0; e < nw; ++e) {
      CHECK(dw1[e] == doctest::Approx(dw2[e]).epsilon(1e-13));
      CHECK(dpw1[e] == doctest::Approx(dpw2[e]).epsilon(1e-13));
    }

    std::vector<double> dxf(ns), dwf(nw), dpxf(ns), dpwf(nw);
    hamilton_rhs_local(model, x, w, px, pw, t, true, dxf, dwf, dpxf, dpwf);
    for (int i = 0; i < ns; ++i) {
      CHECK(dxf[i] == doctest::Approx(dx2[i]));       // state lines untouched
      CHECK(dpxf[i] == doctest::Approx(-dpx2[i]));    // costate negated
    }
    for (int e = 0; e < nw; ++e) {
      CHECK(dwf[e] == doctest::Approx(dw2[e]));
      CHECK(dpwf[e] == doctest::Approx(-dpw2[e]));
    }
  }
}

TEST_CASE("rescaled system shadows the costate system through the lambda map") {
  const NetModel model = tiny_model();
  const int ns = 2, nw = 3;
  std::mt19937_64 rng(7);
  const auto x0 = rand_vec(rng, ns, 0.3);
  const auto w0 = rand_vec(rng, nw, 0.5);
  const auto px0 = rand_vec(rng, ns, 0.3);

  // Costate run: (x, w, p_x, p_w), p_w(0) = 0 so wdot(0) = 0.
  OdeSystem costate;
  costate.dim = 2 * (ns + nw);
  costate.rhs = [&model](double t, std::span<const double> y, std::span<double> dy) {
    hamilton_rhs_local(model, y.subspan(0, 2), y.subspan(2, 3), y.subspan(5, 2), y.subspan(7, 3),
                       t, false, dy.subspan(0, 2), dy.subspan(2, 3), dy.subspan(5, 2),
                       dy.subspan(7, 3));
  };
  std::vector<double> yc(costate.dim, 0.0);
  std::copy(x0.begin(), x0.end(), yc.begin());
  std::copy(w0.begin(), w0.end(), yc.begin() + ns);
  std::copy(px0.begin(), px0.end(), yc.begin() + ns + nw);

  // Lambda run: (x, w, wdot, lambda) from the mapped initial data.
  OdeSystem lam;
  lam.dim = 2 * (ns + nw);
  lam.rhs = [&model](double t, std::span<const double> y, std::span<double> dy) {
    lambda_rhs(model, y.subspan(0, 2), y.subspan(2, 3), y.subspan(5, 3), y.subspan(8, 2), t,
               false, dy.subspan(0, 2), dy.subspan(5, 3), dy.subspan(8, 2));
    for (int e = 0; e < 3; ++e) dy[2 + e] = y[5 + e];
  };
  std::vector<double> yl(lam.dim, 0.0);
  std::copy(x0.begin(), x0.end(), yl.begin());
  std::copy(w0.begin(), w0.end(), yl.begin() + ns);
  const auto lam0 = lambda_from_costate(model, x0, w0, px0, 0.0);
  std::copy(lam0.begin(), lam0.end(), yl.begin() + ns + 2 * nw);

  IntegratorConfig cfg;
  cfg.tau = 1e-4;
  cfg.T = 1.0;
  cfg.scheme = IntegratorConfig::Scheme::RK4;
  cfg.record_stride = 100;
  const auto log_c = integrate(costate, yc, cfg, SignPolicy::forward());
  const auto log_l = integrate(lam, yl, cfg, SignPolicy::forward());

  REQUIRE(log_c.rows.size() == log_l.rows.size());
  double worst = 0.0;
  for (std::size_t r = 0; r < log_c.rows.size(); ++r) {
    const double t = log_c.rows[r][0];
    const std::vector<double> x(log_c.rows[r].begin() + 1, log_c.rows[r].begin() + 1 + ns);
    const std::vector<double> w(log_c.rows[r].begin() + 1 + ns,
                                log_c.rows[r].begin() + 1 + ns + nw);
    const std::vector<double> px(log_c.rows[r].begin() + 1 + ns + nw,
                                 log_c.rows[r].begin() + 1 + 2 * ns + nw);
    const auto mapped = lambda_from_costate(model, x, w, px, t);
    for (int i = 0; i < ns; ++i) {
      worst = std::max(worst, std::abs(mapped[i] - log_l.rows[r][1 + ns + 2 * nw + i]));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("reverse topological order and the backprop limit") {
  // Diamond DAG 1 -> {2,3} -> 4.
  const NetGraph g = NetGraph::build(4, 1, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}, {4});
  const auto order = reverse_topological_order(g);
  REQUIRE(order.size() == 3);
  CHECK(order.front() == g.state_index(3));  // the sink first

  // A cycle is rejected.
  const NetGraph cyc = NetGraph::build(3, 1, {{1, 2}, {2, 3}, {3, 2}}, {3});
  CHECK_THROWS_AS(reverse_topological_order(cyc), NotDAG);

  const Activation act;
  const std::vector<double> u = {0.5};
  const std::vector<double> w = {0.7, -0.4, 1.2, 0.9};
  LossSpec loss{3.0, VectorSignal::broadcast(ScalarSignal::constant(0.1), 1)};
  const auto x = dag_forward_state(g, act, u, w);
  const auto fast = backprop_limit_lambda(g, act, x, u, w, loss, 0.0);
  const auto fd = fd_backprop_delta(g, act, u, w, loss, 0.0);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast[i] == doctest::Approx(fd[i]).epsilon(1e-7));
  }
}

TEST_CASE("saturated activation makes the rescaled system degenerate") {
  NetModel model = tiny_model();
  const std::vector<double> x = {0.0, 0.0};
  const std::vector<double> w = {40.0, 0.0, 0.0};  // a_2 = 24 saturates tanh
  const std::vector<double> wdot = {0.0, 0.0, 0.0};
  const std::vector<double> lambda = {0.1, 0.1};
  std::vector<double> dx(2), dwdot(3), dlam(2);
  CHECK_THROWS_AS(lambda_rhs(model, x, w, wdot, lambda, 0.0, false, dx, dwdot, dlam),
                  SingularActivation);
}
