#include <doctest.h>

#include <cmath>

#include "hamlearn/dynamics.hpp"

using namespace hamlearn;

TEST_CASE("activation derivatives match finite differences") {
  const double h = 1e-6;
  for (const char* name : {"tanh", "logistic"}) {
    const Activation act = Activation::from_name(name);
    for (double z : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
      CAPTURE(name);
      CAPTURE(z);
      const double fd1 = (act(z + h) - act(z - h)) / (2.0 * h);
      const double fd2 = (act.d1(z + h) - act.d1(z - h)) / (2.0 * h);
      CHECK(act.d1(z) == doctest::Approx(fd1).epsilon(1e-8));
      CHECK(act.d2(z) == doctest::Approx(fd2).epsilon(1e-8));
      CHECK(std::abs(act(z)) <= act.bound());
    }
  }
}

TEST_CASE("pre-activations and state rhs on a hand net") {
  // 1 -> 2, 1 -> 3, 2 -> 3, 3 -> 2.
  const NetGraph g = NetGraph::build(3, 1, {{1, 2}, {1, 3}, {2, 3}, {3, 2}}, {3});
  const Activation act;  // tanh
  // Flat order: vertex 2's parents (1, 3) then vertex 3's parents (1, 2).
  const std::vector<double> w = {0.5, -0.25, 1.5, 2.0};
  const std::vector<double> x = {0.3, -0.1};
  const std::vector<double> u = {0.8};

  CHECK(vertex_value(g, x, u, 0) == 0.8);   // clamped input
  CHECK(vertex_value(g, x, u, 1) == 0.3);   // state component

  const double a2 = 0.5 * 0.8 + (-0.25) * (-0.1);
  const double a3 = 1.5 * 0.8 + 2.0 * 0.3;
  CHECK(activation_pre(g, x, u, w, 1) == doctest::Approx(a2));
  CHECK(activation_pre(g, x, u, w, 2) == doctest::Approx(a3));
  CHECK_THROWS_AS(activation_pre(g, x, u, w, 0), IndexError);

  const SpeedConstants speed{{2.0, 0.5}};
  const auto dx = state_rhs(g, act, x, u, w, speed);
  CHECK(dx[0] == doctest::Approx(2.0 * (-0.3 + std::tanh(a2))));
  CHECK(dx[1] == doctest::Approx(0.5 * (0.1 + std::tanh(a3))));
}

TEST_CASE("bibo bound is initial magnitude plus activation sup") {
  const Activation act;
  const std::vector<double> x0 = {0.4, -1.2};
  const auto b = bibo_bound(x0, act);
  CHECK(b[0] == doctest::Approx(1.4));
  CHECK(b[1] == doctest::Approx(2.2));
}
