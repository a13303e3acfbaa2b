#pragma once

// Golden-value checks run by `disclab verify`.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disclab/bounds.hpp"

namespace disclab {

struct CheckResult {
  std::string group;  // p2, density, variational, bounds, kernel
  std::string name;
  double expected;
  double actual;
  double tolerance;  // absolute
  bool passed;
};

struct VerifyOptions {
  LogGammaFn log_gamma = default_log_gamma;
};

std::vector<std::string_view> check_groups();

/// Runs every check, or only those of `group` (invalid_argument if unknown).
std::vector<CheckResult> run_checks(std::optional<std::string_view> group = std::nullopt,
                                    const VerifyOptions& options = {});

}  // namespace disclab
