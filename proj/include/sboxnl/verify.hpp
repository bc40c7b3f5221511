#pragma once

#include <string>
#include <vector>

#include "sboxnl/sbox.hpp"

namespace sboxnl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  unsigned max_workers = 12;
  /// Negative control: flips one spectrum element before the checks run.
  bool inject_fault = false;
};

/// Largest n or m that verify_sbox accepts.
inline constexpr unsigned verify_max_bits = 8;

/// Runs the invariant checks against the direct-sum and affine-distance
/// oracles. Throws std::invalid_argument above verify_max_bits.
std::vector<CheckResult> verify_sbox(const SBox& s, const VerifyOptions& options = {});

}  // namespace sboxnl
