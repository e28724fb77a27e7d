#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hamlearn {

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

/// Self-contained numerical cross-checks, each pitting one implementation
/// route against an independent one. Suites: equivalence, backprop_limit,
/// riccati, bibo, blowup, adjoint.
std::vector<Check> run_verify_suite(const std::string& suite, std::uint64_t seed);

std::vector<std::string> verify_suite_names();

}  // namespace hamlearn
