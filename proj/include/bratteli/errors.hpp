#pragma once

#include <stdexcept>
#include <string>

namespace bratteli {

/// Precondition violated by the caller (bad levels, mismatched paths, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite enumeration would exceed the caller-supplied cap.
class CapacityError : public std::length_error {
 public:
  CapacityError(const std::string& what, std::size_t count)
      : std::length_error(what), count_(count) {}
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

/// Input is well formed but outside what the solvers handle (e.g. a
/// non-primitive matrix handed to the Perron iteration).
class UnsupportedInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bratteli
