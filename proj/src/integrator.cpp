#include "hamlearn/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace hamlearn {

int TrajectoryLog::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("trajectory log has no column '" + name + "'");
}

void TrajectoryLog::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      if (i) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

std::string TrajectoryLog::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

namespace {

bool exceeds(std::span<const double> y, double threshold) {
  for (double v : y) {
    if (!(std::abs(v) <= threshold)) return true;  // catches NaN as well
  }
  return false;
}

}  // namespace

TrajectoryLog integrate(const OdeSystem& system, std::vector<double> init,
                        const IntegratorConfig& cfg, SignPolicy policy) {
  cfg.validate();

  TrajectoryLog log;
  log.columns.push_back("t");
  for (int i = 0; i < system.dim; ++i) {
    log.columns.push_back(i < static_cast<int>(system.labels.size())
                              ? system.labels[i]
                              : "y" + std::to_string(i + 1));
  }
  log.columns.push_back("s");
  for (const auto& name : system.extra_labels) log.columns.push_back(name);

  std::vector<double> y = std::move(init);
  std::vector<double> dy(system.dim), k1(system.dim), k2(system.dim), k3(system.dim),
      k4(system.dim), tmp(system.dim);
  std::vector<double> extras;

  const int steps = cfg.steps();
  const double tau = cfg.tau;

  auto record = [&](double t, double s) {
    std::vector<double> row;
    row.reserve(2 + y.size() + system.extra_labels.size());
    row.push_back(t);
    row.insert(row.end(), y.begin(), y.end());
    row.push_back(s);
    if (system.extras) {
      extras.clear();
      system.extras(t, y, s, extras);
      row.insert(row.end(), extras.begin(), extras.end());
    }
    log.rows.push_back(std::move(row));
  };

  double s = policy.sign_at(0.0, y);
  record(0.0, s);

  for (int n = 0; n < steps; ++n) {
    const double t = n * tau;
    if (n > 0) s = policy.sign_at(t, y);

    if (cfg.scheme == IntegratorConfig::Scheme::Euler) {
      system.rhs(t, y, dy);
      for (int i = 0; i < system.dim; ++i) y[i] += tau * s * dy[i];
    } else {
      system.rhs(t, y, k1);
      for (int i = 0; i < system.dim; ++i) tmp[i] = y[i] + 0.5 * tau * s * k1[i];
      system.rhs(t + 0.5 * tau, tmp, k2);
      for (int i = 0; i < system.dim; ++i) tmp[i] = y[i] + 0.5 * tau * s * k2[i];
      system.rhs(t + 0.5 * tau, tmp, k3);
      for (int i = 0; i < system.dim; ++i) tmp[i] = y[i] + tau * s * k3[i];
      system.rhs(t + tau, tmp, k4);
      for (int i = 0; i < system.dim; ++i) {
        y[i] += tau * s * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
      }
    }

    if (exceeds(y, cfg.blowup_threshold)) {
      log.blowup = true;
      log.blowup_step = n + 1;
      log.blowup_time = (n + 1) * tau;
      record((n + 1) * tau, s);
      return log;
    }
    if ((n + 1) % cfg.record_stride == 0) record((n + 1) * tau, s);
  }
  return log;
}

std::vector<double> internal_time(const TrajectoryLog& log) {
  const int tc = log.column_index("t");
  const int sc = log.column_index("s");
  std::vector<double> tbar(log.rows.size(), 0.0);
  // Row n carries the sign used for the step(s) ending at t_n.
  for (std::size_t n = 1; n < log.rows.size(); ++n) {
    const double dt = log.rows[n][tc] - log.rows[n - 1][tc];
    tbar[n] = tbar[n - 1] + log.rows[n][sc] * dt;
  }
  return tbar;
}

}  // namespace hamlearn
