#include <doctest.h>

#include <fstream>

#include "hamlearn/config.hpp"

using namespace hamlearn;
using nlohmann::json;

TEST_CASE("presets parse and describe the advertised tasks") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const ExperimentConfig cfg = parse_experiment(preset_config(name));
    CHECK(cfg.graph.vertex_count() == 6);
    CHECK(cfg.graph.state_size() == 5);
    CHECK(cfg.input.dim() == 1);
  }
  CHECK(parse_experiment(preset_config("sinusoid_q100")).ham.loss.q == 100.0);
  CHECK(parse_experiment(preset_config("sinusoid_q1000")).ham.loss.q == 1000.0);
  CHECK(parse_experiment(preset_config("piecewise_q100")).policy.kind ==
        SignPolicy::Kind::TrackBall);
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}

TEST_CASE("preset files on disk match the built-in definitions") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const std::string path = std::string(PRESET_DIR) + "/" + name + ".json";
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    CHECK(json::parse(in) == preset_config(name));
  }
}

TEST_CASE("unknown keys are fatal") {
  json doc = preset_config("sinusoid_q100");
  doc["momentum"] = 0.9;
  CHECK_THROWS_WITH_AS(parse_experiment(doc), doctest::Contains("momentum"), ConfigError);

  json doc2 = preset_config("sinusoid_q100");
  doc2["hamiltonian"]["mass"] = 1.0;
  CHECK_THROWS_AS(parse_experiment(doc2), ConfigError);
}

TEST_CASE("structural constraints are reported") {
  json doc = preset_config("sinusoid_q100");
  doc["graph"]["d"] = 6;  // d >= n
  CHECK_THROWS_WITH_AS(parse_experiment(doc), doctest::Contains("d"), StructureError);
}

TEST_CASE("field validation") {
  json doc = preset_config("sinusoid_q100");
  doc["integrator"]["tau"] = -1.0;
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);

  doc = preset_config("sinusoid_q100");
  doc["dynamics"]["c"] = json::array({1.0, 1.0});  // wrong length
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);

  doc = preset_config("sinusoid_q100");
  doc["dynamics"]["c"] = -2.0;
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);

  doc = preset_config("sinusoid_q100");
  doc["target"]["kind"] = "triangle";
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);
}

TEST_CASE("defaults are materialized in the resolved echo") {
  json doc = json{
      {"graph", {{"n", 4}, {"d", 1}}},
      {"dynamics", {{"c", 1.0}}},
      {"hamiltonian", {{"m", 1.0}}},
      {"integrator", {{"tau", 0.01}, {"T", 1.0}}},
      {"target", {{"kind", "zero"}}},
  };
  const json resolved = resolved_config(doc);
  CHECK(resolved["graph"]["type"] == "full");
  CHECK(resolved["dynamics"]["activation"] == "tanh");
  CHECK(resolved["dynamics"]["input"] == "target");
  CHECK(resolved["hamiltonian"]["k"] == 0.0);
  CHECK(resolved["integrator"]["scheme"] == "euler");
  CHECK(resolved["policy"]["name"] == "forward");
  CHECK(resolved["system"] == "costate_flipped");
  CHECK(resolved["seed"] == 0);

  // The resolved document re-parses to the same experiment.
  const ExperimentConfig a = parse_experiment(doc);
  const ExperimentConfig b = parse_experiment(resolved);
  CHECK(a.ham.m == b.ham.m);
  CHECK(a.system == b.system);
  CHECK(a.seed == b.seed);
}

TEST_CASE("explicit graphs and per-channel signals") {
  const json doc = json{
      {"graph",
       {{"type", "explicit"},
        {"n", 4},
        {"d", 2},
        {"arcs", json::array({json::array({1, 3}), json::array({2, 3}), json::array({3, 4})})},
        {"outputs", json::array({3, 4})}}},
      {"dynamics",
       {{"c", 1.0},
        {"input", json::array({json{{"kind", "constant"}, {"value", 0.5}},
                               json{{"kind", "sinusoid"}, {"amplitude", 1.0},
                                    {"frequency", 0.5}}})}}},
      {"hamiltonian", {{"m", 1.0}}},
      {"integrator", {{"tau", 0.01}, {"T", 1.0}}},
      {"target", json::array({json{{"kind", "zero"}}, json{{"kind", "constant"}, {"value", 1.0}}})},
  };
  const ExperimentConfig cfg = parse_experiment(doc);
  CHECK(cfg.graph.input_count() == 2);
  CHECK(cfg.graph.outputs().size() == 2);
  CHECK(cfg.input.value(0, 3.0) == 0.5);
  CHECK(cfg.ham.loss.target.value(1, 3.0) == 1.0);

  json bad = doc;
  bad["target"] = json::array({json{{"kind", "zero"}}});  // needs 2 channels
  CHECK_THROWS_AS(parse_experiment(bad), ConfigError);
}

TEST_CASE("system names round-trip") {
  for (const auto* name : {"costate", "costate_flipped", "lambda", "lambda_flipped"}) {
    CHECK(system_name(system_from_name(name)) == name);
  }
  CHECK_THROWS_AS(system_from_name("adjoint"), ConfigError);
}
