#include "qlc/quadratic.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace qlc {
namespace {

using boost::multiprecision::cpp_int;

std::int64_t common_radicand(const Quadratic& a, const Quadratic& b) {
  if (a.radicand() == 0) return b.radicand();
  if (b.radicand() == 0 || a.radicand() == b.radicand()) return a.radicand();
  throw std::invalid_argument("quadratic numbers over different fields: sqrt" + std::to_string(a.radicand()) +
                              " vs sqrt" + std::to_string(b.radicand()));
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Quadratic run() {
    Quadratic v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("cannot parse number '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(const char* w) {
    skip();
    std::size_t n = std::char_traits<char>::length(w);
    if (s_.compare(pos_, n, w) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  Quadratic expr() {
    Quadratic v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  Quadratic term() {
    Quadratic v = factor();
    for (;;) {
      if (eat('*')) v = v * factor();
      else if (eat('/')) v = v / factor();
      else return v;
    }
  }
  Quadratic factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      Quadratic v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (eat_word("sqrt")) {
      Rational arg;
      if (eat('(')) {
        Quadratic inner = expr();
        if (!eat(')')) fail("missing ')'");
        if (!inner.is_rational()) fail("nested surd");
        arg = inner.rational_part();
      } else {
        arg = number();
      }
      if (arg.sign() < 0) fail("negative radicand");
      // sqrt(p/q) = sqrt(p*q)/q
      std::int64_t pq = arg.num() * arg.den();
      auto [k, m] = squarefree_split(pq);
      Rational coef(k, arg.den());
      if (m == 1) return Quadratic(coef);
      return Quadratic(Rational(0), coef, m);
    }
    if (eat_word("phi") || eat_word("golden")) {
      return Quadratic(Rational(1, 2), Rational(1, 2), 5);
    }
    return Quadratic(number());
  }
  Rational number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected a number");
    return Rational::parse(s_.substr(start, pos_ - start));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
  if (n <= 0) return {0, n == 0 ? 0 : n};
  std::int64_t k = 1;
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    while (m % (p * p) == 0) {
      m /= p * p;
      k *= p;
    }
  }
  return {k, m};
}

Quadratic::Quadratic(Rational r, Rational s, std::int64_t d) : r_(r), s_(s), d_(d) {
  if (s_.is_zero() || d_ == 0) {
    s_ = Rational(0);
    d_ = 0;
    return;
  }
  if (d_ < 2) throw std::invalid_argument("radicand must be >= 2");
  auto [k, m] = squarefree_split(d_);
  if (m == 1) {
    r_ += s_ * Rational(k);
    s_ = Rational(0);
    d_ = 0;
  } else if (k != 1) {
    s_ *= Rational(k);
    d_ = m;
  }
}

Quadratic Quadratic::parse(const std::string& text) { return Parser(text).run(); }

long double Quadratic::to_long_double() const {
  long double v = r_.to_long_double();
  if (d_ != 0) v += s_.to_long_double() * std::sqrt(static_cast<long double>(d_));
  return v;
}

int Quadratic::sign() const {
  if (d_ == 0) return r_.sign();
  int rs = r_.sign();
  int ss = s_.sign();
  if (rs == 0) return ss;
  if (rs == ss) return rs;
  long double approx = to_long_double();
  long double scale = std::fabs(r_.to_long_double()) + std::fabs(s_.to_long_double()) * std::sqrt(static_cast<long double>(d_));
  if (std::fabs(approx) > 1e-12L * scale) return approx > 0 ? 1 : -1;
  // r^2 vs s^2 d with r = a/b, s = c/e  <=>  a^2 e^2 vs c^2 d b^2
  cpp_int a = r_.num(), b = r_.den(), c = s_.num(), e = s_.den();
  cpp_int lhs = a * a * e * e;
  cpp_int rhs = c * c * b * b * d_;
  if (lhs > rhs) return rs;
  if (lhs < rhs) return ss;
  return 0;  // unreachable for squarefree d
}

std::int64_t Quadratic::floor() const {
  if (d_ == 0) return r_.floor();
  long double approx = to_long_double();
  auto k = static_cast<std::int64_t>(std::floor(approx));
  // correct a possible off-by-one from rounding
  while ((*this - Quadratic(Rational(k))).sign() < 0) --k;
  while ((*this - Quadratic(Rational(k + 1))).sign() >= 0) ++k;
  return k;
}

Quadratic operator+(const Quadratic& a, const Quadratic& b) {
  std::int64_t d = common_radicand(a, b);
  return Quadratic(a.r_ + b.r_, a.s_ + b.s_, d);
}

Quadratic operator-(const Quadratic& a, const Quadratic& b) {
  std::int64_t d = common_radicand(a, b);
  return Quadratic(a.r_ - b.r_, a.s_ - b.s_, d);
}

Quadratic operator*(const Quadratic& a, const Quadratic& b) {
  std::int64_t d = common_radicand(a, b);
  return Quadratic(a.r_ * b.r_ + a.s_ * b.s_ * Rational(d), a.r_ * b.s_ + a.s_ * b.r_, d);
}

Quadratic operator/(const Quadratic& a, const Quadratic& b) {
  std::int64_t d = common_radicand(a, b);
  if (b.d_ == 0) {
    if (b.r_.is_zero()) throw std::domain_error("division by zero");
    return Quadratic(a.r_ / b.r_, a.s_ / b.r_, d);
  }
  // multiply by the conjugate: (r - s sqrt d) / (r^2 - s^2 d)
  Rational norm = b.r_ * b.r_ - b.s_ * b.s_ * Rational(d);
  Quadratic num = a * b.conjugate();
  return Quadratic(num.r_ / norm, num.s_ / norm, d);
}

std::string Quadratic::str() const {
  if (d_ == 0) return r_.str();
  std::string surd = s_.str() + "*sqrt" + std::to_string(d_);
  if (r_.is_zero()) return surd;
  if (s_.sign() < 0) return r_.str() + "-" + (-s_).str() + "*sqrt" + std::to_string(d_);
  return r_.str() + "+" + surd;
}

}  // namespace qlc
