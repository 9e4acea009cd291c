#pragma once

// Randomized battery over the invariants of every module.

#include <cstdint>
#include <string>
#include <vector>

namespace normkit {

enum class SelftestLevel { Quick, Full };

struct SelftestCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string witness;  // first failing instance, empty when all passed
};

struct SelftestReport {
  std::uint64_t seed = 0;
  SelftestLevel level = SelftestLevel::Quick;
  std::vector<SelftestCheck> checks;

  int passed() const;
  int failed() const;
  bool ok() const { return failed() == 0; }
};

/// Deterministic given (seed, level): every check draws from its own
/// generator seeded from `seed` and the check's position.
SelftestReport selftest(std::uint64_t seed, SelftestLevel level = SelftestLevel::Quick);

}  // namespace normkit
