#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "hamlearn/errors.hpp"

namespace hamlearn {

/// One real-valued channel of an input or target signal, with an analytic
/// derivative where the form allows it (the mixed-order system differentiates
/// activations in time, which pulls in du/dt).
class ScalarSignal {
 public:
  static ScalarSignal zero() { return constant(0.0); }

  static ScalarSignal constant(double v) {
    ScalarSignal s;
    s.value_ = [v](double) { return v; };
    s.deriv_ = [](double) { return 0.0; };
    return s;
  }

  static ScalarSignal sinusoid(double amplitude, double frequency, double phase = 0.0) {
    ScalarSignal s;
    const double w = 2.0 * std::numbers::pi * frequency;
    s.value_ = [=](double t) { return amplitude * std::sin(w * t + phase); };
    s.deriv_ = [=](double t) { return amplitude * w * std::cos(w * t + phase); };
    return s;
  }

  struct Segment {
    double duration = 1.0;
    bool is_cosine = true;  // false: constant level
    double amplitude = 1.0; // cosine amplitude or constant level
    double frequency = 0.5; // cycles per unit time, cosine segments only
  };

  /// Segments tile [0, sum durations); queries past the end hold the last
  /// segment's local form.
  static ScalarSignal piecewise_cosine(std::vector<Segment> segments) {
    if (segments.empty()) throw ConfigError("piecewise signal needs at least one segment");
    ScalarSignal s;
    auto locate = [segments](double t) {
      double start = 0.0;
      for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (t < start + segments[i].duration) return std::pair{segments[i], t - start};
        start += segments[i].duration;
      }
      return std::pair{segments.back(), t - start};
    };
    s.value_ = [locate](double t) {
      auto [seg, local] = locate(t);
      if (!seg.is_cosine) return seg.amplitude;
      return seg.amplitude * std::cos(2.0 * std::numbers::pi * seg.frequency * local);
    };
    s.deriv_ = [locate](double t) {
      auto [seg, local] = locate(t);
      if (!seg.is_cosine) return 0.0;
      const double w = 2.0 * std::numbers::pi * seg.frequency;
      return -seg.amplitude * w * std::sin(w * local);
    };
    return s;
  }

  /// Arbitrary evaluator; derivative falls back to a central difference.
  static ScalarSignal custom(std::function<double(double)> f) {
    ScalarSignal s;
    s.value_ = f;
    s.deriv_ = [f](double t) {
      const double h = 1e-6;
      return (f(t + h) - f(t - h)) / (2.0 * h);
    };
    return s;
  }

  double value(double t) const { return value_(t); }
  double deriv(double t) const { return deriv_(t); }

 private:
  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
};

/// Fixed-width stack of scalar channels; used for both the d-dimensional
/// input u(t) and the per-output tracking target.
class VectorSignal {
 public:
  VectorSignal() = default;
  explicit VectorSignal(std::vector<ScalarSignal> channels) : channels_(std::move(channels)) {}

  static VectorSignal broadcast(ScalarSignal s, int dim) {
    return VectorSignal(std::vector<ScalarSignal>(dim, std::move(s)));
  }

  int dim() const { return static_cast<int>(channels_.size()); }

  double value(int i, double t) const { return channels_[i].value(t); }
  double deriv(int i, double t) const { return channels_[i].deriv(t); }

  std::vector<double> values(double t) const {
    std::vector<double> out(channels_.size());
    for (std::size_t i = 0; i < channels_.size(); ++i) out[i] = channels_[i].value(t);
    return out;
  }

 private:
  std::vector<ScalarSignal> channels_;
};

}  // namespace hamlearn
