#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

// Thrown when an operation would exceed a configured resource budget
// (term counts in symbolic expansions, dense matrix dimensions).
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by decode() when too much weight lies outside the code subspace.
struct leakage_error : std::runtime_error {
  leakage_error(const std::string& what, double leak)
      : std::runtime_error(what), leakage(leak) {}
  double leakage;
};

}  // namespace spinchain
