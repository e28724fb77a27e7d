#pragma once

#include <stdexcept>
#include <string>

namespace hamlearn {

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct SingularActivation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotDAG : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hamlearn
