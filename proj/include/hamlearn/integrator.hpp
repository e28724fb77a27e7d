#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hamlearn/errors.hpp"
#include "hamlearn/policy.hpp"

namespace hamlearn {

struct IntegratorConfig {
  enum class Scheme { Euler, RK4 };

  double tau = 1e-2;
  double T = 1.0;
  Scheme scheme = Scheme::Euler;
  int record_stride = 1;
  double blowup_threshold = 1e12;

  int steps() const { return static_cast<int>(std::floor(T / tau + 0.5)); }

  void validate() const {
    if (!(tau > 0.0)) throw ConfigError("integrator: tau must be > 0");
    if (!(T > 0.0)) throw ConfigError("integrator: T must be > 0");
    if (tau > T) throw ConfigError("integrator: tau must not exceed T");
    if (record_stride < 1) throw ConfigError("integrator: record_stride must be >= 1");
  }

  static Scheme scheme_from_name(const std::string& name) {
    if (name == "euler") return Scheme::Euler;
    if (name == "rk4") return Scheme::RK4;
    throw ConfigError("unknown scheme '" + name + "' (expected euler|rk4)");
  }
};

/// Column-labelled numeric table: one row per recorded step, plus the blowup
/// diagnostics. CSV serialization keeps 17 significant digits so doubles
/// round-trip exactly.
struct TrajectoryLog {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool blowup = false;
  long blowup_step = -1;
  double blowup_time = 0.0;

  int column_index(const std::string& name) const;
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// One first-order ODE system in packed form. `labels` name the components;
/// `extras` (optional) appends derived per-row quantities (losses, energy
/// traces) at record time.
struct OdeSystem {
  int dim = 0;
  std::function<void(double t, std::span<const double> y, std::span<double> dy)> rhs;
  std::vector<std::string> labels;
  std::function<void(double t, std::span<const double> y, double s, std::vector<double>& out)>
      extras;
  std::vector<std::string> extra_labels;
};

/// Fixed-step causal integration y_{n+1} = y_n + tau * s(t_n) * RHS(y_n, t_n)
/// (Euler) or the classical 4-stage variant with the same per-step sign.
/// Stops early (with the blowup flag set) when any |y_i| exceeds the
/// threshold.
TrajectoryLog integrate(const OdeSystem& system, std::vector<double> init,
                        const IntegratorConfig& cfg, SignPolicy policy);

/// Cumulative reparameterization tbar(t) = sum s * tau: how far into the
/// environmental stream the agent effectively is under sign flipping.
/// Requires `t` and `s` columns; purely diagnostic.
std::vector<double> internal_time(const TrajectoryLog& log);

}  // namespace hamlearn
