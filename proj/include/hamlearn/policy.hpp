#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "hamlearn/errors.hpp"

namespace hamlearn {

/// Produces the multiplier s(t) in {+1,-1} applied to the whole Hamilton
/// right-hand side. TrackBall carries one bit of state (the current sign),
/// owned by the trajectory integrating it; Periodic and AlwaysForward are
/// pure.
struct SignPolicy {
  enum class Kind { AlwaysForward, TrackBall, Periodic };

  Kind kind = Kind::AlwaysForward;
  double radius = 1.0;          // TrackBall: membership is |phase|^2 <= radius
  double flip_frequency = 1.0;  // Periodic: s = sign(cos(2 pi f t))
  double current = 1.0;         // TrackBall sign state

  static SignPolicy forward() { return {}; }
  static SignPolicy track_ball(double radius) {
    return {Kind::TrackBall, radius, 1.0, 1.0};
  }
  static SignPolicy periodic(double frequency) {
    return {Kind::Periodic, 1.0, frequency, 1.0};
  }

  /// Evaluated once per step, before the step. TrackBall flips the stored
  /// sign when the phase point lies outside the ball.
  double sign_at(double t, std::span<const double> phase) {
    switch (kind) {
      case Kind::AlwaysForward:
        return 1.0;
      case Kind::Periodic: {
        const double c = std::cos(2.0 * std::numbers::pi * flip_frequency * t);
        return c >= 0.0 ? 1.0 : -1.0;  // cos = 0 resolves to +1
      }
      case Kind::TrackBall: {
        double norm2 = 0.0;
        for (double v : phase) norm2 += v * v;
        if (norm2 > radius) current = -current;
        return current;
      }
    }
    return 1.0;
  }

  static SignPolicy from_name(const std::string& name, double radius, double frequency) {
    if (name == "forward") return forward();
    if (name == "track_ball") return track_ball(radius);
    if (name == "periodic") return periodic(frequency);
    throw ConfigError("unknown policy '" + name + "' (expected forward|track_ball|periodic)");
  }
};

}  // namespace hamlearn
