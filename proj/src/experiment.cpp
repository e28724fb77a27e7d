#include "hamlearn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hamlearn {

SystemKind system_from_name(const std::string& name) {
  if (name == "costate") return SystemKind::Costate;
  if (name == "costate_flipped") return SystemKind::CostateFlipped;
  if (name == "lambda") return SystemKind::Lambda;
  if (name == "lambda_flipped") return SystemKind::LambdaFlipped;
  throw ConfigError("unknown system '" + name +
                    "' (expected costate|costate_flipped|lambda|lambda_flipped)");
}

std::string system_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::Costate: return "costate";
    case SystemKind::CostateFlipped: return "costate_flipped";
    case SystemKind::Lambda: return "lambda";
    case SystemKind::LambdaFlipped: return "lambda_flipped";
  }
  return "?";
}

std::vector<double> seeded_weights(std::uint64_t seed, int count, double range) {
  // mt19937_64 output mapped to [0,1) by hand so the draw is identical on
  // every platform regardless of distribution implementations.
  std::mt19937_64 rng(seed);
  std::vector<double> w(count);
  for (int i = 0; i < count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w[i] = (2.0 * u - 1.0) * range;
  }
  return w;
}

NetModel make_model(const ExperimentConfig& cfg) {
  return NetModel{cfg.graph, cfg.act, cfg.input, cfg.ham};
}

namespace {

bool is_lambda(SystemKind k) {
  return k == SystemKind::Lambda || k == SystemKind::LambdaFlipped;
}
bool is_flipped(SystemKind k) {
  return k == SystemKind::CostateFlipped || k == SystemKind::LambdaFlipped;
}

}  // namespace

OdeSystem make_system(const ExperimentConfig& cfg) {
  const NetModel model = make_model(cfg);
  const auto& g = cfg.graph;
  const int ns = g.state_size();
  const int nw = g.weight_count();
  const bool lam = is_lambda(cfg.system);
  const bool flipped = is_flipped(cfg.system);

  OdeSystem sys;
  sys.dim = 2 * (ns + nw);
  for (int i = 0; i < ns; ++i) sys.labels.push_back("x" + std::to_string(g.state_vertex(i) + 1));
  for (const auto& [from, to] : g.arcs()) {
    sys.labels.push_back("w_" + std::to_string(from + 1) + "_" + std::to_string(to + 1));
  }
  if (lam) {
    for (const auto& [from, to] : g.arcs()) {
      sys.labels.push_back("wdot_" + std::to_string(from + 1) + "_" + std::to_string(to + 1));
    }
    for (int i = 0; i < ns; ++i) {
      sys.labels.push_back("lam" + std::to_string(g.state_vertex(i) + 1));
    }
  } else {
    for (int i = 0; i < ns; ++i) {
      sys.labels.push_back("px" + std::to_string(g.state_vertex(i) + 1));
    }
    for (const auto& [from, to] : g.arcs()) {
      sys.labels.push_back("pw_" + std::to_string(from + 1) + "_" + std::to_string(to + 1));
    }
  }

  if (lam) {
    sys.rhs = [model, ns, nw, flipped](double t, std::span<const double> y, std::span<double> dy) {
      auto x = y.subspan(0, ns);
      auto w = y.subspan(ns, nw);
      auto wdot = y.subspan(ns + nw, nw);
      auto lambda = y.subspan(ns + 2 * nw, ns);
      lambda_rhs(model, x, w, wdot, lambda, t, flipped, dy.subspan(0, ns),
                 dy.subspan(ns + nw, nw), dy.subspan(ns + 2 * nw, ns));
      for (int e = 0; e < nw; ++e) dy[ns + e] = wdot[e];
    };
  } else {
    sys.rhs = [model, ns, nw, flipped](double t, std::span<const double> y, std::span<double> dy) {
      hamilton_rhs_local(model, y.subspan(0, ns), y.subspan(ns, nw), y.subspan(ns + nw, ns),
                         y.subspan(ns + nw + ns, nw), t, flipped, dy.subspan(0, ns),
                         dy.subspan(ns, nw), dy.subspan(ns + nw, ns),
                         dy.subspan(ns + nw + ns, nw));
    };
  }

  sys.extra_labels = {"loss", "reg", "kinetic", "lagrangian", "hamiltonian", "err"};
  sys.extras = [model, ns, nw, lam](double t, std::span<const double> y, double /*s*/,
                                    std::vector<double>& out) {
    const auto& g = model.graph;
    const auto& ham = model.cfg;
    const double c = ham.speed.mean();
    const double phi = ham.phi(t);
    auto x = y.subspan(0, ns);
    auto w = y.subspan(ns, nw);

    std::vector<double> p_x(ns), p_w(nw);
    if (lam) {
      auto wdot = y.subspan(ns + nw, nw);
      auto lambda = y.subspan(ns + 2 * nw, ns);
      for (int e = 0; e < nw; ++e) p_w[e] = -ham.m * c * phi * wdot[e];
      const auto u = model.input.values(t);
      const auto a = activations(g, x, u, w);
      for (int i = 0; i < ns; ++i) {
        const double s1 = model.act.d1(a[i]);
        p_x[i] = std::abs(s1) < 1e-12 ? std::numeric_limits<double>::quiet_NaN()
                                      : lambda[i] * phi / s1;
      }
    } else {
      auto px = y.subspan(ns + nw, ns);
      auto pw = y.subspan(ns + nw + ns, nw);
      p_x.assign(px.begin(), px.end());
      p_w.assign(pw.begin(), pw.end());
    }

    const double L = ham.loss.state_loss(g, x, t);
    const double reg = ham.k * weight_regularizer(w);
    double wdot2 = 0.0;
    if (lam) {
      for (int e = 0; e < nw; ++e) wdot2 += y[ns + nw + e] * y[ns + nw + e];
    } else {
      for (int e = 0; e < nw; ++e) {
        const double wd = -p_w[e] / (ham.m * c * phi);
        wdot2 += wd * wd;
      }
    }
    const double kinetic = 0.5 * ham.m * wdot2;
    const double lagrangian = (L + reg + kinetic) * phi;
    const double H = hamiltonian_value(model, x, w, p_x, p_w, t);
    const int out_state = g.state_index(g.outputs().front());
    const double err = x[out_state] - ham.loss.target.value(0, t);

    out = {L, reg, kinetic, lagrangian, H, err};
  };

  return sys;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto& g = cfg.graph;
  const int ns = g.state_size();
  const int nw = g.weight_count();
  if (cfg.input.dim() != g.input_count()) {
    throw ConfigError("input signal dimension does not match the input count");
  }
  if (cfg.ham.loss.target.dim() != static_cast<int>(g.outputs().size())) {
    throw ConfigError("target signal dimension does not match the output count");
  }
  if (static_cast<int>(cfg.ham.speed.c.size()) != ns) {
    throw ConfigError("speed constants must cover every non-input vertex");
  }

  std::vector<double> init(2 * (ns + nw), 0.0);
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != ns) throw ConfigError("x0 size mismatch");
    std::copy(cfg.x0.begin(), cfg.x0.end(), init.begin());
  }
  std::vector<double> w0 = cfg.w0;
  if (w0.empty()) {
    w0 = seeded_weights(cfg.seed, nw, cfg.w_init_range);
  } else if (static_cast<int>(w0.size()) != nw) {
    throw ConfigError("w0 size mismatch");
  }
  std::copy(w0.begin(), w0.end(), init.begin() + ns);

  ExperimentResult res;
  res.log = integrate(make_system(cfg), std::move(init), cfg.integ, cfg.policy);

  const auto& log = res.log;
  const int err_col = log.column_index("err");
  const int loss_col = log.column_index("loss");
  double acc = 0.0;
  for (const auto& row : log.rows) acc += std::abs(row[err_col]);
  res.summary.rows = static_cast<long>(log.rows.size());
  res.summary.mean_tracking_error = log.rows.empty() ? 0.0 : acc / log.rows.size();
  res.summary.final_tracking_error = log.rows.empty() ? 0.0 : std::abs(log.rows.back()[err_col]);
  res.summary.final_loss = log.rows.empty() ? 0.0 : log.rows.back()[loss_col];
  res.summary.blowup = log.blowup;
  res.summary.blowup_step = log.blowup_step;
  return res;
}

std::vector<SweepCell> sweep(const ExperimentConfig& base, const std::vector<double>& values,
                             const std::function<void(ExperimentConfig&, double)>& apply) {
  std::vector<SweepCell> cells;
  cells.reserve(values.size());
  for (double v : values) {
    SweepCell cell;
    cell.value = v;
    try {
      ExperimentConfig cfg = base;
      apply(cfg, v);
      cell.summary = run_experiment(cfg).summary;
    } catch (const std::exception& ex) {
      cell.failed = true;
      cell.error = ex.what();
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace hamlearn
