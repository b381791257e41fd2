#pragma once

// Command-line front end. Commands:
//   ml, scalar, solve, intervals, trace, regularity, rellich, decay, duality, selftest
// Exit codes: 0 success, 1 numerical failure, 2 usage/validation error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlfrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

int parse_and_run(int argc, const char* const* argv);
// args excludes the program name. Normal output goes to `out` unless --out
// is given; diagnostics go to `err`.
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestReport {
  std::string text;
  int failures = 0;
};

// Deterministic invariant suite (no timings, fixed seeds derived from `seed`).
SelftestReport selftest(std::uint64_t seed);

}  // namespace rlfrac::cli
