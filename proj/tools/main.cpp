#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamlearn/config.hpp"
#include "hamlearn/lq.hpp"
#include "hamlearn/oracles.hpp"
#include "hamlearn/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

json load_doc(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty() && !preset.empty()) {
    throw hamlearn::ConfigError("pass either --config or --preset, not both");
  }
  if (!config_path.empty()) return hamlearn::read_json_file(config_path);
  if (!preset.empty()) return hamlearn::preset_config(preset);
  throw hamlearn::ConfigError("one of --config or --preset is required");
}

json summary_json(const hamlearn::ExperimentSummary& s) {
  return json{
      {"final_tracking_error", s.final_tracking_error},
      {"mean_tracking_error", s.mean_tracking_error},
      {"final_loss", s.final_loss},
      {"blowup", s.blowup},
      {"blowup_step", s.blowup_step},
      {"rows", s.rows},
  };
}

int cmd_validate(const std::string& config_path, const std::string& preset) {
  const json doc = load_doc(config_path, preset);
  const hamlearn::ExperimentConfig cfg = hamlearn::parse_experiment(doc);
  const auto& g = cfg.graph;
  json out{
      {"vertices", g.vertex_count()},
      {"inputs", g.input_count()},
      {"neurons", g.state_size()},
      {"weights", g.weight_count()},
      {"outputs", json::array()},
      {"switch_sums_ok", hamlearn::switch_sums_check(g)},
      {"system", hamlearn::system_name(cfg.system)},
  };
  for (int v : g.outputs()) out["outputs"].push_back(v + 1);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& preset, const std::string& out_dir,
            long long seed_override) {
  const json doc = load_doc(config_path, preset);
  hamlearn::ExperimentConfig cfg = hamlearn::parse_experiment(doc);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

  const auto result = hamlearn::run_experiment(cfg);

  fs::create_directories(out_dir);
  const fs::path traj = fs::path(out_dir) / "trajectory.csv";
  const fs::path summ = fs::path(out_dir) / "summary.json";
  const fs::path echo = fs::path(out_dir) / "config_echo.json";
  {
    std::ofstream os(traj);
    result.log.write_csv(os);
  }
  {
    json s = summary_json(result.summary);
    s["seed"] = cfg.seed;
    std::ofstream os(summ);
    os << s.dump(2) << "\n";
  }
  {
    json e = doc;
    if (seed_override >= 0) e["seed"] = cfg.seed;
    std::ofstream os(echo);
    os << hamlearn::resolved_config(e).dump(2) << "\n";
  }
  std::cout << traj.string() << "\n" << summ.string() << "\n";
  if (result.summary.blowup) {
    std::cerr << "trajectory exceeded the blowup threshold at step " << result.summary.blowup_step
              << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& preset, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
  const json doc = load_doc(config_path, preset);
  const hamlearn::ExperimentConfig base = hamlearn::parse_experiment(doc);

  std::function<void(hamlearn::ExperimentConfig&, double)> apply;
  if (param == "q") {
    apply = [](hamlearn::ExperimentConfig& c, double v) { c.ham.loss.q = v; };
  } else if (param == "c") {
    apply = [](hamlearn::ExperimentConfig& c, double v) {
      c.ham.speed = hamlearn::SpeedConstants::uniform(v, c.graph.state_size());
    };
  } else if (param == "theta") {
    apply = [](hamlearn::ExperimentConfig& c, double v) { c.ham.theta = v; };
  } else if (param == "m") {
    apply = [](hamlearn::ExperimentConfig& c, double v) { c.ham.m = v; };
  } else if (param == "k") {
    apply = [](hamlearn::ExperimentConfig& c, double v) { c.ham.k = v; };
  } else if (param == "tau") {
    apply = [](hamlearn::ExperimentConfig& c, double v) { c.integ.tau = v; };
  } else if (param == "seed") {
    apply = [](hamlearn::ExperimentConfig& c, double v) {
      c.seed = static_cast<std::uint64_t>(v);
    };
  } else {
    throw hamlearn::ConfigError("unsupported sweep parameter '" + param +
                                "' (expected q|c|theta|m|k|tau|seed)");
  }

  const auto cells = hamlearn::sweep(base, values, apply);
  json rows = json::array();
  bool any_failed = false;
  for (const auto& cell : cells) {
    json row{{"param", param}, {"value", cell.value}, {"failed", cell.failed}};
    if (cell.failed) {
      row["error"] = cell.error;
      any_failed = true;
    } else {
      row["summary"] = summary_json(cell.summary);
      any_failed = any_failed || cell.summary.blowup;
    }
    rows.push_back(std::move(row));
  }
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / ("sweep_" + param + ".json");
  {
    std::ofstream os(path);
    os << rows.dump(2) << "\n";
  }
  std::cout << rows.dump(2) << "\n" << path.string() << "\n";
  return any_failed ? kExitNumerical : kExitOk;
}

int cmd_lq(double a, double b, double q, double r, double T, double tau, double theta0) {
  hamlearn::LQProblem prob{a, b, q, r, T};
  const auto roots = hamlearn::algebraic_riccati_roots(prob);

  hamlearn::IntegratorConfig cfg;
  cfg.tau = tau;
  cfg.T = T;
  cfg.scheme = hamlearn::IntegratorConfig::Scheme::RK4;
  cfg.record_stride = std::max(1, cfg.steps() / 2000);
  const auto flip = hamlearn::simultaneous_flip_check(prob, theta0, cfg);

  const double discrete_gain = hamlearn::discrete_lq_gain(a, b, q, r, T, tau);

  json out{
      {"stable_root", roots.stable},
      {"unstable_root", roots.unstable},
      {"s_coef", prob.s_coef()},
      {"flip_check",
       {{"max_residual", flip.max_residual},
        {"division_near_zero", flip.division_near_zero},
        {"compared_rows", flip.compared_rows}}},
      {"discrete_gain", discrete_gain},
  };
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> suites =
      suite == "all" ? hamlearn::verify_suite_names() : std::vector<std::string>{suite};
  bool all_ok = true;
  for (const auto& s : suites) {
    for (const auto& check : hamlearn::run_verify_suite(s, seed)) {
      std::cout << (check.passed ? "PASS" : "FAIL") << "  " << s << "/" << check.name
                << "  residual=" << check.residual << "  (" << check.detail << ")\n";
      all_ok = all_ok && check.passed;
    }
  }
  return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time network learning as a Hamiltonian flow"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir = "out", param, suite = "all";
  long long seed_override = -1;
  std::uint64_t verify_seed = 0;
  std::vector<double> values;
  double a = 0.0, b = 1.0, q = 1.0, r = 1.0, T = 20.0, tau = 1e-4, theta0 = 0.0;

  auto* validate = app.add_subcommand("validate", "Parse a config and report the structure");
  validate->add_option("--config", config_path, "JSON config file");
  validate->add_option("--preset", preset, "built-in config name");

  auto* run = app.add_subcommand("run", "Integrate one experiment and write CSV + summary");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--preset", preset, "built-in config name");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed_override, "override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Re-run one config across parameter values");
  sweep->add_option("--config", config_path, "JSON config file");
  sweep->add_option("--preset", preset, "built-in config name");
  sweep->add_option("--axis,--param", param, "q|c|theta|m|k|tau|seed")->required();
  sweep->add_option("--values", values, "values to sweep")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory");

  auto* lq = app.add_subcommand("lq", "Scalar regulator diagnostics");
  lq->add_option("--a", a, "drift coefficient");
  lq->add_option("--b", b, "control coefficient");
  lq->add_option("--q", q, "state cost");
  lq->add_option("--r", r, "control cost");
  lq->add_option("--T", T, "horizon");
  lq->add_option("--tau", tau, "step size");
  lq->add_option("--theta0", theta0, "initial gain");

  auto* verify = app.add_subcommand("verify", "Cross-check numerical routes against each other");
  verify->add_option("--suite", suite,
                     "all|equivalence|backprop-limit|riccati|bibo|blowup|adjoint");
  verify->add_option("--seed", verify_seed, "randomization seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path, preset);
    if (run->parsed()) return cmd_run(config_path, preset, out_dir, seed_override);
    if (sweep->parsed()) return cmd_sweep(config_path, preset, param, values, out_dir);
    if (lq->parsed()) return cmd_lq(a, b, q, r, T, tau, theta0);
    if (verify->parsed()) return cmd_verify(suite, verify_seed);
  } catch (const hamlearn::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const hamlearn::StructureError& ex) {
    std::cerr << "structure error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
