// SPDX-License-Identifier: Apache-2.0
//
// Named invariant checks over every module at small sizes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace anwt {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity (error, defect, ...)
  double tolerance = 0.0;  // pass when value <= tolerance
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::uint64_t> seeds{0, 1, 2};
};

/// Runs every check; exceptions inside a check mark it failed with the
/// message as detail.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& options = {});

}  // namespace anwt
