#pragma once

#include <cstdint>
#include <string>

#include "qlc/rational.hpp"

namespace qlc {

// An element r + s*sqrt(d) of a real quadratic field, d squarefree >= 2.
// Rationals carry d == 0. Mixing two different radicands throws.
class Quadratic {
 public:
  Quadratic() = default;
  Quadratic(Rational r) : r_(r) {}  // NOLINT
  Quadratic(Rational r, Rational s, std::int64_t d);

  // Small expression language: integers, decimals, sqrtN, sqrt(N), phi,
  // + - * / and parentheses. "(sqrt5-1)/2", "sqrt5-2", "1/3", "phi-1".
  static Quadratic parse(const std::string& text);

  const Rational& rational_part() const { return r_; }
  const Rational& surd_part() const { return s_; }
  std::int64_t radicand() const { return d_; }
  bool is_rational() const { return d_ == 0; }

  long double to_long_double() const;
  int sign() const;
  std::int64_t floor() const;
  Quadratic frac() const { return *this - Quadratic(Rational(floor())); }
  Quadratic conjugate() const { return Quadratic(r_, -s_, d_); }

  Quadratic operator-() const { return Quadratic(-r_, -s_, d_); }
  friend Quadratic operator+(const Quadratic& a, const Quadratic& b);
  friend Quadratic operator-(const Quadratic& a, const Quadratic& b);
  friend Quadratic operator*(const Quadratic& a, const Quadratic& b);
  friend Quadratic operator/(const Quadratic& a, const Quadratic& b);
  friend bool operator==(const Quadratic& a, const Quadratic& b) = default;
  friend bool operator<(const Quadratic& a, const Quadratic& b) { return (a - b).sign() < 0; }

  // Canonical text accepted by parse(): "r", "s*sqrtd", "r+s*sqrtd".
  std::string str() const;

 private:
  Rational r_;
  Rational s_;
  std::int64_t d_ = 0;
};

// Writes n = k^2 * m with m squarefree; returns {k, m}.
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

}  // namespace qlc
