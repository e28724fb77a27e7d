#include "hamlearn/bvp.hpp"

#include <algorithm>
#include <cmath>

namespace hamlearn {

namespace {

std::vector<std::vector<double>> integrate_state_forward(const ControlProblem& pb,
                                                         std::span<const double> x0,
                                                         const std::vector<std::vector<double>>& v,
                                                         double tau) {
  const int M = static_cast<int>(v.size()) - 1;
  std::vector<std::vector<double>> x(M + 1, std::vector<double>(pb.state_dim));
  x[0].assign(x0.begin(), x0.end());
  std::vector<double> f(pb.state_dim);
  for (int n = 0; n < M; ++n) {
    const double t = n * tau;
    pb.drift(t, x[n], f);
    for (int i = 0; i < pb.state_dim; ++i) {
      double bv = 0.0;
      for (int j = 0; j < pb.control_dim; ++j) {
        bv += pb.B[static_cast<std::size_t>(i) * pb.control_dim + j] * v[n][j];
      }
      x[n + 1][i] = x[n][i] + tau * (f[i] + bv);
    }
  }
  return x;
}

double objective(const ControlProblem& pb, const std::vector<std::vector<double>>& x,
                 const std::vector<std::vector<double>>& v, double tau) {
  const int M = static_cast<int>(v.size()) - 1;
  auto integrand = [&](int n) {
    const double t = n * tau;
    double v2 = 0.0;
    for (double c : v[n]) v2 += c * c;
    return 0.5 * pb.control_weight(t) * v2 + pb.state_cost(t, x[n]);
  };
  double sum = 0.5 * (integrand(0) + integrand(M));
  for (int n = 1; n < M; ++n) sum += integrand(n);
  return sum * tau;
}

}  // namespace

BvpResult bvp_sweep(const ControlProblem& problem, std::span<const double> x0,
                    const BvpConfig& cfg) {
  const int M = std::max(1, static_cast<int>(std::floor(cfg.T / cfg.tau + 0.5)));
  const double tau = cfg.T / M;

  BvpResult res;
  res.times.resize(M + 1);
  for (int n = 0; n <= M; ++n) res.times[n] = n * tau;

  std::vector<std::vector<double>> v(M + 1, std::vector<double>(problem.control_dim, 0.0));
  auto x = integrate_state_forward(problem, x0, v, tau);
  double best = objective(problem, x, v, tau);

  std::vector<std::vector<double>> p(M + 1, std::vector<double>(problem.state_dim, 0.0));
  std::vector<double> jt(problem.state_dim), grad(problem.state_dim);
  double gamma = cfg.gamma;

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    // Backward costate pass along the stored forward trajectory (time
    // reversal: terminal condition p(T) = 0 becomes the initial one).
    p[M].assign(problem.state_dim, 0.0);
    for (int n = M - 1; n >= 0; --n) {
      const double t = (n + 1) * tau;
      problem.drift_jac_transpose_times(t, x[n + 1], p[n + 1], jt);
      problem.state_cost_grad(t, x[n + 1], grad);
      for (int i = 0; i < problem.state_dim; ++i) {
        p[n][i] = p[n + 1][i] + tau * (jt[i] + grad[i]);
      }
    }

    // Pointwise minimizer of the Hamiltonian in the control.
    std::vector<std::vector<double>> vstar(M + 1, std::vector<double>(problem.control_dim));
    for (int n = 0; n <= M; ++n) {
      const double rho = problem.control_weight(n * tau);
      for (int j = 0; j < problem.control_dim; ++j) {
        double btp = 0.0;
        for (int i = 0; i < problem.state_dim; ++i) {
          btp += problem.B[static_cast<std::size_t>(i) * problem.control_dim + j] * p[n][i];
        }
        vstar[n][j] = -btp / rho;
      }
    }

    // Damped relaxation with objective backtracking.
    double change = 0.0;
    bool accepted = false;
    for (int backoff = 0; backoff < 60; ++backoff) {
      std::vector<std::vector<double>> vc(M + 1, std::vector<double>(problem.control_dim));
      change = 0.0;
      for (int n = 0; n <= M; ++n) {
        for (int j = 0; j < problem.control_dim; ++j) {
          vc[n][j] = (1.0 - gamma) * v[n][j] + gamma * vstar[n][j];
          change = std::max(change, std::abs(vc[n][j] - v[n][j]));
        }
      }
      auto xc = integrate_state_forward(problem, x0, vc, tau);
      const double obj = objective(problem, xc, vc, tau);
      if (obj <= best + 1e-12 * (1.0 + std::abs(best))) {
        v = std::move(vc);
        x = std::move(xc);
        best = obj;
        accepted = true;
        break;
      }
      gamma *= 0.5;
    }
    res.objective_history.push_back(best);
    res.sweeps = sweep + 1;
    res.control_change = change;
    if (!accepted || change < cfg.tol) {
      res.converged = accepted && change < cfg.tol;
      break;
    }
    gamma = std::min(gamma * 2.0, cfg.gamma);
  }

  // Final costate pass consistent with the accepted trajectory.
  p[M].assign(problem.state_dim, 0.0);
  for (int n = M - 1; n >= 0; --n) {
    const double t = (n + 1) * tau;
    problem.drift_jac_transpose_times(t, x[n + 1], p[n + 1], jt);
    problem.state_cost_grad(t, x[n + 1], grad);
    for (int i = 0; i < problem.state_dim; ++i) p[n][i] = p[n + 1][i] + tau * (jt[i] + grad[i]);
  }

  res.state = std::move(x);
  res.costate = std::move(p);
  res.control = std::move(v);
  return res;
}

TrajectoryLog BvpResult::to_log() const {
  TrajectoryLog log;
  const int nx = state.empty() ? 0 : static_cast<int>(state[0].size());
  const int nv = control.empty() ? 0 : static_cast<int>(control[0].size());
  log.columns.push_back("t");
  for (int i = 0; i < nx; ++i) log.columns.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < nx; ++i) log.columns.push_back("p" + std::to_string(i + 1));
  for (int i = 0; i < nv; ++i) log.columns.push_back("v" + std::to_string(i + 1));
  for (std::size_t n = 0; n < times.size(); ++n) {
    std::vector<double> row;
    row.push_back(times[n]);
    row.insert(row.end(), state[n].begin(), state[n].end());
    row.insert(row.end(), costate[n].begin(), costate[n].end());
    row.insert(row.end(), control[n].begin(), control[n].end());
    log.rows.push_back(std::move(row));
  }
  return log;
}

ControlProblem make_net_control_problem(const NetModel& model) {
  const auto& g = model.graph;
  const int ns = g.state_size();
  const int nw = g.weight_count();
  const double c = model.cfg.speed.mean();

  ControlProblem pb;
  pb.state_dim = ns + nw;
  pb.control_dim = nw;
  pb.B.assign(static_cast<std::size_t>(pb.state_dim) * nw, 0.0);
  for (int e = 0; e < nw; ++e) pb.B[static_cast<std::size_t>(ns + e) * nw + e] = 1.0;

  pb.drift = [model](double t, std::span<const double> y, std::span<double> out) {
    const auto& g = model.graph;
    const int ns = g.state_size();
    auto u = model.input.values(t);
    state_rhs_into(g, model.act, y.subspan(0, ns), u, y.subspan(ns), model.cfg.speed,
                   out.subspan(0, ns));
    for (std::size_t e = ns; e < out.size(); ++e) out[e] = 0.0;
  };
  pb.control_weight = [model, c](double t) { return model.cfg.m * c * model.cfg.phi(t); };
  pb.state_cost = [model, c](double t, std::span<const double> y) {
    const int ns = model.graph.state_size();
    const double ell = model.cfg.k * weight_regularizer(y.subspan(ns)) +
                       model.cfg.loss.state_loss(model.graph, y.subspan(0, ns), t);
    return c * ell * model.cfg.phi(t);
  };
  pb.state_cost_grad = [model, c](double t, std::span<const double> y, std::span<double> out) {
    const auto& g = model.graph;
    const int ns = g.state_size();
    const double phi = model.cfg.phi(t);
    model.cfg.loss.state_loss_grad(g, y.subspan(0, ns), t, out.subspan(0, ns));
    for (int i = 0; i < ns; ++i) out[i] *= c * phi;
    for (int e = 0; e < g.weight_count(); ++e) out[ns + e] = c * model.cfg.k * y[ns + e] * phi;
  };
  pb.drift_jac_transpose_times = [model](double t, std::span<const double> y,
                                         std::span<const double> p, std::span<double> out) {
    const auto& g = model.graph;
    const int ns = g.state_size();
    auto x = y.subspan(0, ns);
    auto w = y.subspan(ns);
    auto u = model.input.values(t);
    const auto a = activations(g, x, u, w);
    for (int vi = g.input_count(); vi < g.vertex_count(); ++vi) {
      const int i = g.state_index(vi);
      double acc = -model.cfg.speed.c[i] * p[i];
      for (int vk : g.children(vi)) {
        const int k = g.state_index(vk);
        acc += model.cfg.speed.c[k] * model.act.d1(a[k]) * w[g.arc_index(vi, vk)] * p[k];
      }
      out[i] = acc;
      for (int vj : g.parents(vi)) {
        const int e = g.arc_index(vj, vi);
        out[ns + e] =
            model.cfg.speed.c[i] * model.act.d1(a[i]) * vertex_value(g, x, u, vj) * p[i];
      }
    }
  };
  return pb;
}

BvpResult bvp_sweep_net(const NetModel& model, std::span<const double> x0,
                        std::span<const double> w0, const BvpConfig& cfg) {
  std::vector<double> y0(x0.begin(), x0.end());
  y0.insert(y0.end(), w0.begin(), w0.end());
  return bvp_sweep(make_net_control_problem(model), y0, cfg);
}

ControlProblem make_lq_control_problem(double a, double b, double q, double r) {
  ControlProblem pb;
  pb.state_dim = 1;
  pb.control_dim = 1;
  pb.B = {b};
  pb.drift = [a](double, std::span<const double> x, std::span<double> out) { out[0] = a * x[0]; };
  pb.control_weight = [r](double) { return r; };
  pb.state_cost = [q](double, std::span<const double> x) { return 0.5 * q * x[0] * x[0]; };
  pb.state_cost_grad = [q](double, std::span<const double> x, std::span<double> out) {
    out[0] = q * x[0];
  };
  pb.drift_jac_transpose_times = [a](double, std::span<const double>, std::span<const double> p,
                                     std::span<double> out) { out[0] = a * p[0]; };
  return pb;
}

ControlProblem make_weight_only_problem(double m, double theta) {
  ControlProblem pb;
  pb.state_dim = 1;
  pb.control_dim = 1;
  pb.B = {1.0};
  pb.drift = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  pb.control_weight = [m, theta](double t) { return m * std::exp(theta * t); };
  pb.state_cost = [theta](double t, std::span<const double> w) {
    return 0.5 * w[0] * w[0] * std::exp(theta * t);
  };
  pb.state_cost_grad = [theta](double t, std::span<const double> w, std::span<double> out) {
    out[0] = w[0] * std::exp(theta * t);
  };
  pb.drift_jac_transpose_times = [](double, std::span<const double>, std::span<const double>,
                                    std::span<double> out) { out[0] = 0.0; };
  return pb;
}

}  // namespace hamlearn
