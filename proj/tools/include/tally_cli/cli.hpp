#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tally/database.hpp"

namespace tally::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

/// Parsed `--synthetic` argument, e.g. "n=8,m=1024,arity=3" or
/// "n=20,m=500,arity=2-6".
struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  Arity arity_lo = 2;
  Arity arity_hi = 2;
};

/// Throws InvalidArgument on malformed input.
SyntheticSpec parse_synthetic(const std::string& spec);
Database make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Entry point shared by the `tally` executable and the tests. Structured
/// output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tally::cli
