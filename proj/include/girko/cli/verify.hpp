#pragma once

// Deterministic identity suite behind `girko_lab verify`. Each check draws
// its instances from SeedStream{seed, index} and records the worst error
// (or the violation count) against a fixed tolerance.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace girko::cli {

struct VerifyCheck {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst = 0.0;      // largest error seen; 0 for pure counting checks
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

std::vector<VerifyCheck> run_verify(std::uint64_t seed);

/// One line per check: "PASS name ..." or "FAIL name ...".
std::string format_check(const VerifyCheck& c);

}  // namespace girko::cli
