#pragma once

#include <string>

#include <json.hpp>

#include "hamlearn/experiment.hpp"

namespace hamlearn {

/// Parse a full experiment description. Unknown keys anywhere in the document
/// are fatal (ConfigError), as are missing required keys and type mismatches.
ExperimentConfig parse_experiment(const nlohmann::json& doc);

/// Read and parse a JSON config file.
ExperimentConfig load_config(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// Copy of the document with every omitted optional key filled in with its
/// default; written next to run outputs so results are self-describing.
nlohmann::json resolved_config(const nlohmann::json& doc);

/// Built-in configurations: sinusoid_q100, sinusoid_q1000, piecewise_q100.
nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace hamlearn
