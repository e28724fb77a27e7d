#pragma once

#include <cmath>
#include <string>

#include "hamlearn/errors.hpp"

namespace hamlearn {

/// Bounded smooth squashing function with analytic first and second
/// derivatives (the mixed-order costate system needs sigma'').
struct Activation {
  enum class Kind { Tanh, Logistic };

  Kind kind = Kind::Tanh;

  double operator()(double z) const {
    if (kind == Kind::Tanh) return std::tanh(z);
    return 1.0 / (1.0 + std::exp(-z));
  }

  double d1(double z) const {
    if (kind == Kind::Tanh) {
      double s = std::tanh(z);
      return 1.0 - s * s;
    }
    double s = (*this)(z);
    return s * (1.0 - s);
  }

  double d2(double z) const {
    if (kind == Kind::Tanh) {
      double s = std::tanh(z);
      return -2.0 * s * (1.0 - s * s);
    }
    double s = (*this)(z);
    return s * (1.0 - s) * (1.0 - 2.0 * s);
  }

  /// sup |sigma|
  double bound() const { return 1.0; }

  std::string name() const { return kind == Kind::Tanh ? "tanh" : "logistic"; }

  static Activation from_name(const std::string& name) {
    if (name == "tanh") return {Kind::Tanh};
    if (name == "logistic") return {Kind::Logistic};
    throw ConfigError("unknown activation '" + name + "' (expected tanh|logistic)");
  }
};

}  // namespace hamlearn
