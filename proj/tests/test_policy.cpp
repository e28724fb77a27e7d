#include <doctest.h>

#include <array>
#include <cmath>

#include "hamlearn/policy.hpp"

using namespace hamlearn;

TEST_CASE("periodic policy evaluates sign(cos(2 pi f t))") {
  SignPolicy p = SignPolicy::periodic(0.5);
  const std::array<double, 1> phase = {0.0};
  CHECK(p.sign_at(0.0, phase) == 1.0);
  CHECK(p.sign_at(1.0, phase) == -1.0);  // cos(pi) < 0
  CHECK(p.sign_at(2.0, phase) == 1.0);
  // Stateless: repeated queries at the same t agree.
  CHECK(p.sign_at(1.0, phase) == p.sign_at(1.0, phase));
}

TEST_CASE("track ball flips only outside the ball and keeps its state") {
  SignPolicy p = SignPolicy::track_ball(10.0);
  const std::array<double, 2> inside = {1.0, 1.0};    // norm^2 = 2
  const std::array<double, 2> outside = {3.0, 2.0};   // norm^2 = 13
  CHECK(p.sign_at(0.0, inside) == 1.0);
  CHECK(p.sign_at(0.1, inside) == 1.0);
  CHECK(p.sign_at(0.2, outside) == -1.0);  // first exit flips
  CHECK(p.sign_at(0.3, outside) == 1.0);   // still outside: flips again
  CHECK(p.sign_at(0.4, inside) == 1.0);    // back inside: sign retained
}

TEST_CASE("always-forward ignores everything") {
  SignPolicy p = SignPolicy::forward();
  const std::array<double, 1> huge = {1e9};
  CHECK(p.sign_at(0.0, huge) == 1.0);
  CHECK(p.sign_at(5.0, huge) == 1.0);
}

TEST_CASE("name parsing") {
  CHECK(SignPolicy::from_name("forward", 1.0, 1.0).kind == SignPolicy::Kind::AlwaysForward);
  CHECK(SignPolicy::from_name("track_ball", 4.0, 1.0).radius == 4.0);
  CHECK(SignPolicy::from_name("periodic", 1.0, 2.5).flip_frequency == 2.5);
  CHECK_THROWS_AS(SignPolicy::from_name("sometimes", 1.0, 1.0), ConfigError);
}

TEST_CASE("squared sign leaves quadratic step observables invariant") {
  // With dx = s*f, dp = s*g: dx*dp and dx^2 + dp^2 do not depend on s.
  const double f = 0.37, g = -1.4;
  for (double s : {1.0, -1.0}) {
    const double dx = s * f, dp = s * g;
    CHECK(dx * dp == doctest::Approx(f * g));
    CHECK(dx * dx + dp * dp == doctest::Approx(f * f + g * g));
  }
}
