#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlc {

// Bad input (wrong basis, malformed pieces, out-of-range requests).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BasisMismatch : public ValidationError {
 public:
  BasisMismatch() : ValidationError("lengths are declared over different bases") {}
};

// Float-evaluated ordering fell inside the tie guard band.
class OrderingAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoDecomposition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WindowTooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AccumulatingOccurrences : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotRelativelyDense : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientWindow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PrecisionExhausted : public std::runtime_error {
 public:
  PrecisionExhausted(const std::string& what, std::size_t trusted) : std::runtime_error(what), trusted_(trusted) {}
  std::size_t trusted_prefix() const { return trusted_; }

 private:
  std::size_t trusted_;
};

}  // namespace qlc
