#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "qlc/quadratic.hpp"
#include "qlc/rational.hpp"

namespace qlc {

inline constexpr std::size_t kMaxBasis = 4;

// Tie guard for float-evaluated orderings. Differences closer to zero than
// this (relative to the magnitude of the terms, floored at 1) are rejected.
inline constexpr long double kOrderingGuard = 1e-12L;

struct BasisElement {
  std::string name;
  long double value = 0;
  std::optional<Quadratic> exact;
};

// An ordered list of named positive reals. Bases are interned: two bases with
// the same element names and values are the same object, so ExactLength can
// compare basis identity by pointer.
class Basis {
 public:
  static const Basis* make(std::vector<BasisElement> elements);
  // Convenience: every element given as an exact expression ("1", "phi", "sqrt2").
  static const Basis* exact(const std::vector<std::pair<std::string, std::string>>& named_exprs);
  static const Basis* unit();    // {1}
  static const Basis* golden();  // {1, phi}

  std::size_t size() const { return elements_.size(); }
  const BasisElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  // True when all elements are exact over one quadratic field; orderings are
  // then decided without float guards.
  bool is_exact() const { return exact_; }
  std::int64_t radicand() const { return radicand_; }

 private:
  explicit Basis(std::vector<BasisElement> e);
  std::vector<BasisElement> elements_;
  bool exact_ = false;
  std::int64_t radicand_ = 0;
};

// A rational linear combination of basis reals. Equality is coefficient-wise;
// ordering uses the exact field when available, else the guarded float value.
// A default-constructed ExactLength is a basis-free zero that adopts the basis
// of whatever it is combined with.
class ExactLength {
 public:
  ExactLength() = default;
  explicit ExactLength(const Basis* basis) : basis_(basis) {}
  ExactLength(const Basis* basis, std::initializer_list<Rational> coeffs);
  static ExactLength from_coeffs(const Basis* basis, const std::vector<Rational>& coeffs);
  // Parses "3/2", "2*phi+1", "1-phi/2": a linear combination of basis names.
  static ExactLength parse(const Basis* basis, const std::string& text);

  const Basis* basis() const { return basis_; }
  const Rational& coeff(std::size_t i) const { return c_[i]; }
  std::size_t dimension() const { return basis_ ? basis_->size() : 0; }

  bool is_zero() const;
  long double value() const;
  int sign() const;
  std::optional<Quadratic> exact_value() const;

  ExactLength operator-() const;
  ExactLength& operator+=(const ExactLength& o);
  ExactLength& operator-=(const ExactLength& o);
  ExactLength& operator*=(const Rational& k);
  friend ExactLength operator+(ExactLength a, const ExactLength& b) { return a += b; }
  friend ExactLength operator-(ExactLength a, const ExactLength& b) { return a -= b; }
  friend ExactLength operator*(ExactLength a, const Rational& k) { return a *= k; }
  friend ExactLength operator*(const Rational& k, ExactLength a) { return a *= k; }

  friend bool operator==(const ExactLength& a, const ExactLength& b);
  friend std::strong_ordering operator<=>(const ExactLength& a, const ExactLength& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const;
  std::size_t hash() const;

 private:
  const Basis* basis_ = nullptr;
  std::array<Rational, kMaxBasis> c_{};
};

const Basis* common_basis(const ExactLength& a, const ExactLength& b);

ExactLength min(const ExactLength& a, const ExactLength& b);
ExactLength max(const ExactLength& a, const ExactLength& b);

}  // namespace qlc

template <>
struct std::hash<qlc::ExactLength> {
  std::size_t operator()(const qlc::ExactLength& x) const noexcept { return x.hash(); }
};
