#include "hamlearn/config.hpp"

#include <fstream>

namespace hamlearn {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError(section + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& section, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(section + ": missing required key '" + key + "'");
  return *it;
}

double num(const json& obj, const std::string& section, const char* key) {
  const json& v = require(obj, section, key);
  if (!v.is_number()) throw ConfigError(section + "." + key + ": expected a number");
  return v.get<double>();
}

double num_or(const json& obj, const std::string& section, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(section + "." + key + ": expected a number");
  return it->get<double>();
}

int integer(const json& obj, const std::string& section, const char* key) {
  const json& v = require(obj, section, key);
  if (!v.is_number_integer()) throw ConfigError(section + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& section, const char* key) {
  const json& v = require(obj, section, key);
  if (!v.is_string()) throw ConfigError(section + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::string text_or(const json& obj, const std::string& section, const char* key,
                    const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError(section + "." + key + ": expected a string");
  return it->get<std::string>();
}

ScalarSignal parse_scalar_signal(const json& spec, const std::string& section) {
  const std::string kind = text(spec, section, "kind");
  if (kind == "zero") {
    check_keys(spec, section, {"kind"});
    return ScalarSignal::zero();
  }
  if (kind == "constant") {
    check_keys(spec, section, {"kind", "value"});
    return ScalarSignal::constant(num(spec, section, "value"));
  }
  if (kind == "sinusoid") {
    check_keys(spec, section, {"kind", "amplitude", "frequency", "phase"});
    return ScalarSignal::sinusoid(num(spec, section, "amplitude"), num(spec, section, "frequency"),
                                  num_or(spec, section, "phase", 0.0));
  }
  if (kind == "piecewise") {
    check_keys(spec, section, {"kind", "segments"});
    const json& segs = require(spec, section, "segments");
    if (!segs.is_array() || segs.empty()) {
      throw ConfigError(section + ".segments: expected a non-empty array");
    }
    std::vector<ScalarSignal::Segment> segments;
    for (const json& s : segs) {
      const std::string ss = section + ".segments[]";
      check_keys(s, ss, {"duration", "cosine", "amplitude", "frequency"});
      ScalarSignal::Segment seg;
      seg.duration = num(s, ss, "duration");
      seg.is_cosine = s.value("cosine", true);
      seg.amplitude = num(s, ss, "amplitude");
      seg.frequency = num_or(s, ss, "frequency", 0.5);
      segments.push_back(seg);
    }
    return ScalarSignal::piecewise_cosine(std::move(segments));
  }
  throw ConfigError(section + ".kind: unknown signal kind '" + kind + "'");
}

/// An object broadcasts one scalar form to `dim` channels; an array gives one
/// spec per channel.
VectorSignal parse_vector_signal(const json& spec, const std::string& section, int dim) {
  if (spec.is_array()) {
    if (static_cast<int>(spec.size()) != dim) {
      throw ConfigError(section + ": expected " + std::to_string(dim) + " channel specs");
    }
    std::vector<ScalarSignal> channels;
    for (const json& s : spec) channels.push_back(parse_scalar_signal(s, section + "[]"));
    return VectorSignal(std::move(channels));
  }
  return VectorSignal::broadcast(parse_scalar_signal(spec, section), dim);
}

NetGraph parse_graph(const json& spec) {
  const std::string kind = text_or(spec, "graph", "type", "full");
  if (kind == "full") {
    check_keys(spec, "graph", {"type", "n", "d"});
    return NetGraph::fully_connected(integer(spec, "graph", "n"), integer(spec, "graph", "d"));
  }
  if (kind == "explicit") {
    check_keys(spec, "graph", {"type", "n", "d", "arcs", "outputs"});
    const json& arcs_j = require(spec, "graph", "arcs");
    if (!arcs_j.is_array()) throw ConfigError("graph.arcs: expected an array of [from, to] pairs");
    std::vector<std::pair<int, int>> arcs;
    for (const json& a : arcs_j) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
          !a[1].is_number_integer()) {
        throw ConfigError("graph.arcs: each arc must be an integer pair");
      }
      arcs.emplace_back(a[0].get<int>(), a[1].get<int>());
    }
    const json& outs_j = require(spec, "graph", "outputs");
    if (!outs_j.is_array()) throw ConfigError("graph.outputs: expected an array");
    std::vector<int> outputs;
    for (const json& o : outs_j) {
      if (!o.is_number_integer()) throw ConfigError("graph.outputs: expected integers");
      outputs.push_back(o.get<int>());
    }
    return NetGraph::build(integer(spec, "graph", "n"), integer(spec, "graph", "d"), arcs,
                           outputs);
  }
  throw ConfigError("graph.type: expected full|explicit");
}

}  // namespace

ExperimentConfig parse_experiment(const json& doc) {
  check_keys(doc, "config",
             {"graph", "dynamics", "hamiltonian", "integrator", "policy", "target", "system",
              "seed", "w_init_range"});

  ExperimentConfig cfg;
  cfg.graph = parse_graph(require(doc, "config", "graph"));
  const int ns = cfg.graph.state_size();

  const json& dyn = require(doc, "config", "dynamics");
  check_keys(dyn, "dynamics", {"activation", "c", "x0", "input"});
  cfg.act = Activation::from_name(text_or(dyn, "dynamics", "activation", "tanh"));
  const json& c_j = require(dyn, "dynamics", "c");
  if (c_j.is_number()) {
    cfg.ham.speed = SpeedConstants::uniform(c_j.get<double>(), ns);
  } else if (c_j.is_array() && static_cast<int>(c_j.size()) == ns) {
    cfg.ham.speed.c = c_j.get<std::vector<double>>();
  } else {
    throw ConfigError("dynamics.c: expected a number or an array with one entry per neuron");
  }
  for (double c : cfg.ham.speed.c) {
    if (!(c > 0.0)) throw ConfigError("dynamics.c: speeds must be positive");
  }
  if (auto it = dyn.find("x0"); it != dyn.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != ns) {
      throw ConfigError("dynamics.x0: expected an array with one entry per neuron");
    }
    cfg.x0 = it->get<std::vector<double>>();
  }

  const json& ham = require(doc, "config", "hamiltonian");
  check_keys(ham, "hamiltonian", {"m", "k", "theta", "q"});
  cfg.ham.m = num(ham, "hamiltonian", "m");
  cfg.ham.k = num_or(ham, "hamiltonian", "k", 0.0);
  cfg.ham.theta = num_or(ham, "hamiltonian", "theta", 0.0);
  cfg.ham.loss.q = num_or(ham, "hamiltonian", "q", 1.0);
  if (!(cfg.ham.m > 0.0)) throw ConfigError("hamiltonian.m: mass must be positive");

  const json& integ = require(doc, "config", "integrator");
  check_keys(integ, "integrator", {"tau", "T", "scheme", "record_stride", "blowup_threshold"});
  cfg.integ.tau = num(integ, "integrator", "tau");
  cfg.integ.T = num(integ, "integrator", "T");
  cfg.integ.scheme =
      IntegratorConfig::scheme_from_name(text_or(integ, "integrator", "scheme", "euler"));
  if (auto it = integ.find("record_stride"); it != integ.end()) {
    cfg.integ.record_stride = integer(integ, "integrator", "record_stride");
  }
  cfg.integ.blowup_threshold = num_or(integ, "integrator", "blowup_threshold", 1e12);
  cfg.integ.validate();
  cfg.ham.T = cfg.integ.T;

  const json& target = require(doc, "config", "target");
  cfg.ham.loss.target =
      parse_vector_signal(target, "target", static_cast<int>(cfg.graph.outputs().size()));

  if (auto it = dyn.find("input"); it != dyn.end()) {
    if (it->is_string() && it->get<std::string>() == "target") {
      cfg.input = parse_vector_signal(target, "target", cfg.graph.input_count());
    } else {
      cfg.input = parse_vector_signal(*it, "dynamics.input", cfg.graph.input_count());
    }
  } else {
    // Default: the network listens to the signal it is asked to reproduce.
    cfg.input = parse_vector_signal(target, "target", cfg.graph.input_count());
  }

  if (auto it = doc.find("policy"); it != doc.end()) {
    check_keys(*it, "policy", {"name", "radius", "frequency"});
    cfg.policy = SignPolicy::from_name(text(*it, "policy", "name"),
                                       num_or(*it, "policy", "radius", 1.0),
                                       num_or(*it, "policy", "frequency", 1.0));
  }

  cfg.system = system_from_name(text_or(doc, "config", "system", "costate_flipped"));
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                     it->get<long long>() < 0)) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    cfg.seed = it->get<std::uint64_t>();
  }
  cfg.w_init_range = num_or(doc, "config", "w_init_range", 0.3);

  return cfg;
}

json resolved_config(const json& doc) {
  parse_experiment(doc);  // surface errors before echoing anything
  json out = doc;
  out["graph"]["type"] = out["graph"].value("type", "full");
  json& dyn = out["dynamics"];
  dyn["activation"] = dyn.value("activation", "tanh");
  if (!dyn.contains("input")) dyn["input"] = "target";
  json& ham = out["hamiltonian"];
  ham["k"] = ham.value("k", 0.0);
  ham["theta"] = ham.value("theta", 0.0);
  ham["q"] = ham.value("q", 1.0);
  json& integ = out["integrator"];
  integ["scheme"] = integ.value("scheme", "euler");
  integ["record_stride"] = integ.value("record_stride", 1);
  integ["blowup_threshold"] = integ.value("blowup_threshold", 1e12);
  if (!out.contains("policy")) out["policy"] = json{{"name", "forward"}};
  out["system"] = out.value("system", "costate_flipped");
  out["seed"] = out.value("seed", 0);
  out["w_init_range"] = out.value("w_init_range", 0.3);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + ex.what());
  }
  return doc;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_experiment(read_json_file(path));
}

namespace {

json base_preset(double q) {
  // The costate components scale like phi = e^{theta t}; the raised blowup
  // threshold keeps that representation growth from being misread as a
  // dynamical divergence over the 20 s horizon.
  return json{
      {"graph", {{"type", "full"}, {"n", 6}, {"d", 1}}},
      {"dynamics", {{"activation", "tanh"}, {"c", 1000.0}, {"input", "target"}}},
      {"hamiltonian", {{"m", 0.1}, {"k", 1.0}, {"theta", 4.0}, {"q", q}}},
      {"integrator",
       {{"tau", 1e-4},
        {"T", 20.0},
        {"scheme", "euler"},
        {"record_stride", 100},
        {"blowup_threshold", 1e200}}},
      {"target", {{"kind", "sinusoid"}, {"amplitude", 0.8}, {"frequency", 1.0}}},
      {"system", "costate_flipped"},
      {"seed", 0},
  };
}

}  // namespace

json preset_config(const std::string& name) {
  if (name == "sinusoid_q100") return base_preset(100.0);
  if (name == "sinusoid_q1000") return base_preset(1000.0);
  if (name == "piecewise_q100") {
    json doc = base_preset(100.0);
    doc["target"] = json{
        {"kind", "piecewise"},
        {"segments",
         json::array({
             {{"duration", 4.0}, {"cosine", true}, {"amplitude", 1.0}, {"frequency", 0.5}},
             {{"duration", 3.0}, {"cosine", false}, {"amplitude", 0.8}},
             {{"duration", 4.0}, {"cosine", true}, {"amplitude", 0.4}, {"frequency", 0.5}},
             {{"duration", 3.0}, {"cosine", false}, {"amplitude", -0.5}},
             {{"duration", 4.0}, {"cosine", true}, {"amplitude", 1.0}, {"frequency", 0.5}},
             {{"duration", 2.0}, {"cosine", false}, {"amplitude", 0.0}},
         })},
    };
    doc["dynamics"]["c"] = 10.0;
    doc["hamiltonian"]["theta"] = 0.5;
    doc["integrator"] =
        json{{"tau", 1e-3}, {"T", 20.0}, {"scheme", "euler"}, {"record_stride", 10}};
    doc["system"] = "costate";
    doc["policy"] = json{{"name", "track_ball"}, {"radius", 100.0}};
    return doc;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"sinusoid_q100", "sinusoid_q1000", "piecewise_q100"};
}

}  // namespace hamlearn
