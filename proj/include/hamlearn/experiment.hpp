#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamlearn/bvp.hpp"
#include "hamlearn/costate.hpp"
#include "hamlearn/integrator.hpp"
#include "hamlearn/policy.hpp"

namespace hamlearn {

/// Which first-order system the run integrates forward in time.
enum class SystemKind {
  Costate,         // (x, w, p_x, p_w), plain Hamilton equations
  CostateFlipped,  // same, costate lines negated (the stable learning flow)
  Lambda,          // (x, w, wdot, lambda), rescaled mixed-order form
  LambdaFlipped,
};

SystemKind system_from_name(const std::string& name);
std::string system_name(SystemKind kind);

/// One fully specified simulation run.
struct ExperimentConfig {
  NetGraph graph = NetGraph::fully_connected(2, 1);
  Activation act;
  VectorSignal input;     // dim = input_count
  HamiltonianConfig ham;  // carries speeds, the loss (gain + target), m, k, theta

  IntegratorConfig integ;
  SystemKind system = SystemKind::CostateFlipped;
  SignPolicy policy = SignPolicy::forward();

  std::uint64_t seed = 0;
  double w_init_range = 0.3;  // w(0) ~ U(-range, range), componentwise
  std::vector<double> x0;     // empty: zeros
  std::vector<double> w0;     // empty: seeded uniform draw
};

struct ExperimentSummary {
  double final_tracking_error = 0.0;  // |x_out - y| at the last row, first output
  double mean_tracking_error = 0.0;   // mean of |err| over recorded rows
  double final_loss = 0.0;
  bool blowup = false;
  long blowup_step = -1;
  long rows = 0;
};

struct ExperimentResult {
  TrajectoryLog log;
  ExperimentSummary summary;
};

/// Deterministic initial weights: uniform in [-range, range] from a
/// platform-independent bit stream keyed by `seed`.
std::vector<double> seeded_weights(std::uint64_t seed, int count, double range);

/// Assemble the model of an experiment (graph + activation + input + cost).
NetModel make_model(const ExperimentConfig& cfg);

/// Pack the configured system into an OdeSystem with labelled components and
/// the derived per-row columns (loss, reg, kinetic, lagrangian, hamiltonian,
/// err).
OdeSystem make_system(const ExperimentConfig& cfg);

/// Run one experiment: build, integrate, summarize.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// One cell of a parameter sweep.
struct SweepCell {
  double value = 0.0;
  bool failed = false;
  std::string error;
  ExperimentSummary summary;
};

/// Re-run `base` once per value with `apply(config, value)` applied first.
/// Cells run independently; a throwing cell is captured, not propagated.
std::vector<SweepCell> sweep(const ExperimentConfig& base, const std::vector<double>& values,
                             const std::function<void(ExperimentConfig&, double)>& apply);

}  // namespace hamlearn
