#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tally {

/// 0-based state of a categorical variable.
using State = std::uint16_t;
/// Column index into a Database.
using VarIndex = std::uint32_t;
/// Row (instance) index into a Database.
using RowIndex = std::uint32_t;
using Count = std::uint64_t;
using Arity = std::uint32_t;

inline constexpr Arity kMaxArity = 65536;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (bad index, duplicate variable...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An aggregator received counts that no correct strategy can emit.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// ADtree construction exceeded its node budget.
class AdtreeBuildError : public Error {
 public:
  AdtreeBuildError(std::size_t nodes, std::size_t cap)
      : Error("ADtree build exceeded node cap: " + std::to_string(nodes) +
              " nodes > cap " + std::to_string(cap)),
        nodes_(nodes),
        cap_(cap) {}

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t nodes_;
  std::size_t cap_;
};

}  // namespace tally
