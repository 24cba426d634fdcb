#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace singtrace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input (bad parameter, non-finite entry, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An index or length beyond the evaluable horizon of a sequence.
class HorizonError : public Error {
 public:
  HorizonError(std::uint64_t requested, std::uint64_t horizon)
      : Error("index " + std::to_string(requested) + " outside horizon " +
              std::to_string(horizon)),
        requested_(requested),
        horizon_(horizon) {}

  std::uint64_t requested() const { return requested_; }
  std::uint64_t horizon() const { return horizon_; }

 private:
  std::uint64_t requested_;
  std::uint64_t horizon_;
};

/// A generator whose parameters do not produce a valid (e.g. nonincreasing)
/// sequence.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A submajorization precondition b ≺≺ a failed; carries the first violating
/// prefix index.
class SubmajorizationError : public Error {
 public:
  SubmajorizationError(const std::string& what, std::uint64_t index)
      : Error(what + " (first violation at index " + std::to_string(index) +
              ")"),
        index_(index) {}

  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t index_;
};

}  // namespace singtrace
