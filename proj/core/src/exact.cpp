#include "qlc/exact.hpp"

#include <cctype>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <sstream>

#include "qlc/errors.hpp"

namespace qlc {
namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::deque<std::unique_ptr<Basis>>& registry() {
  static std::deque<std::unique_ptr<Basis>> r;
  return r;
}

bool same_elements(const std::vector<BasisElement>& a, const std::vector<BasisElement>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].value != b[i].value) return false;
    if (a[i].exact.has_value() != b[i].exact.has_value()) return false;
    if (a[i].exact && !(*a[i].exact == *b[i].exact)) return false;
  }
  return true;
}

}  // namespace

Basis::Basis(std::vector<BasisElement> e) : elements_(std::move(e)) {
  exact_ = !elements_.empty();
  for (const auto& el : elements_) {
    if (!el.exact) {
      exact_ = false;
      break;
    }
    std::int64_t d = el.exact->radicand();
    if (d != 0) {
      if (radicand_ != 0 && radicand_ != d) {
        exact_ = false;
        radicand_ = 0;
        break;
      }
      radicand_ = d;
    }
  }
  if (!exact_) radicand_ = 0;
}

const Basis* Basis::make(std::vector<BasisElement> elements) {
  if (elements.empty()) throw ValidationError("basis must have at least one element");
  if (elements.size() > kMaxBasis) throw ValidationError("basis has more than " + std::to_string(kMaxBasis) + " elements");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto& el = elements[i];
    if (el.name.empty()) throw ValidationError("basis element without a name");
    for (std::size_t j = 0; j < i; ++j)
      if (elements[j].name == el.name) throw ValidationError("duplicate basis element '" + el.name + "'");
    if (el.exact) el.value = el.exact->to_long_double();
    if (!(el.value > 0)) throw ValidationError("basis element '" + el.name + "' must be a positive real");
  }
  // exact elements over one field must be Q-independent: at most {rational, surd} directions
  {
    std::vector<std::pair<Rational, Rational>> vecs;
    std::int64_t d = 0;
    bool single_field = true;
    for (const auto& el : elements) {
      if (!el.exact) continue;
      if (el.exact->radicand() != 0) {
        if (d != 0 && d != el.exact->radicand()) single_field = false;
        d = el.exact->radicand();
      }
      vecs.emplace_back(el.exact->rational_part(), el.exact->surd_part());
    }
    if (single_field) {
      if (vecs.size() > 2) throw ValidationError("exact basis elements are linearly dependent over Q");
      if (vecs.size() == 2) {
        Rational det = vecs[0].first * vecs[1].second - vecs[0].second * vecs[1].first;
        if (det.is_zero()) throw ValidationError("exact basis elements are linearly dependent over Q");
      }
    }
  }
  std::lock_guard lock(registry_mutex());
  for (const auto& b : registry())
    if (same_elements(b->elements_, elements)) return b.get();
  registry().push_back(std::unique_ptr<Basis>(new Basis(std::move(elements))));
  return registry().back().get();
}

const Basis* Basis::exact(const std::vector<std::pair<std::string, std::string>>& named_exprs) {
  std::vector<BasisElement> els;
  for (const auto& [name, expr] : named_exprs) {
    BasisElement el;
    el.name = name;
    el.exact = Quadratic::parse(expr);
    els.push_back(std::move(el));
  }
  return make(std::move(els));
}

const Basis* Basis::unit() {
  static const Basis* b = exact({{"1", "1"}});
  return b;
}

const Basis* Basis::golden() {
  static const Basis* b = exact({{"1", "1"}, {"phi", "phi"}});
  return b;
}

std::optional<std::size_t> Basis::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].name == name) return i;
  return std::nullopt;
}

ExactLength::ExactLength(const Basis* basis, std::initializer_list<Rational> coeffs) : basis_(basis) {
  if (!basis) throw ValidationError("null basis");
  if (coeffs.size() > basis->size()) throw ValidationError("more coefficients than basis elements");
  std::size_t i = 0;
  for (const auto& c : coeffs) c_[i++] = c;
}

ExactLength ExactLength::from_coeffs(const Basis* basis, const std::vector<Rational>& coeffs) {
  if (!basis) throw ValidationError("null basis");
  if (coeffs.size() > basis->size()) throw ValidationError("more coefficients than basis elements");
  ExactLength x(basis);
  for (std::size_t i = 0; i < coeffs.size(); ++i) x.c_[i] = coeffs[i];
  return x;
}

ExactLength ExactLength::parse(const Basis* basis, const std::string& text) {
  if (!basis) throw ValidationError("null basis");
  ExactLength out(basis);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) {
    throw ValidationError("cannot parse length '" + text + "': " + why);
  };
  bool first = true;
  skip();
  if (pos == text.size()) fail("empty");
  while (pos < text.size()) {
    int sign = 1;
    skip();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    Rational coef(sign);
    std::optional<std::size_t> element;
    bool divide = false;
    for (;;) {
      skip();
      std::size_t start = pos;
      if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
        Rational v = Rational::parse(text.substr(start, pos - start));
        if (divide) coef /= v;
        else coef *= v;
      } else {
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        if (start == pos) fail("expected a number or a basis name");
        if (divide) fail("cannot divide by a basis element");
        if (element) fail("product of two basis elements");
        auto idx = basis->index_of(text.substr(start, pos - start));
        if (!idx) fail("unknown basis element '" + text.substr(start, pos - start) + "'");
        element = idx;
      }
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        divide = false;
      } else if (pos < text.size() && text[pos] == '/') {
        ++pos;
        divide = true;
      } else {
        break;
      }
    }
    if (!element) {
      element = basis->index_of("1");
      if (!element) fail("bare number but the basis has no element named '1'");
    }
    out.c_[*element] += coef;
  }
  return out;
}

bool ExactLength::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

long double ExactLength::value() const {
  long double v = 0;
  for (std::size_t i = 0; i < dimension(); ++i)
    if (!c_[i].is_zero()) v += c_[i].to_long_double() * (*basis_)[i].value;
  return v;
}

std::optional<Quadratic> ExactLength::exact_value() const {
  if (!basis_) return Quadratic(Rational(0));
  if (!basis_->is_exact()) return std::nullopt;
  Quadratic q;
  for (std::size_t i = 0; i < dimension(); ++i)
    if (!c_[i].is_zero()) q = q + Quadratic(c_[i]) * *(*basis_)[i].exact;
  return q;
}

int ExactLength::sign() const {
  if (is_zero()) return 0;
  long double v = 0;
  long double scale = 0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (c_[i].is_zero()) continue;
    long double term = c_[i].to_long_double() * (*basis_)[i].value;
    v += term;
    scale += std::fabs(term);
  }
  if (basis_->is_exact()) {
    if (std::fabs(v) > kOrderingGuard * scale) return v > 0 ? 1 : -1;
    return exact_value()->sign();
  }
  if (std::fabs(v) <= kOrderingGuard * std::max<long double>(scale, 1)) {
    throw OrderingAmbiguity("ordering of " + str() + " is within the float tie guard; refine the basis");
  }
  return v > 0 ? 1 : -1;
}

ExactLength ExactLength::operator-() const {
  ExactLength r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

const Basis* common_basis(const ExactLength& a, const ExactLength& b) {
  if (a.basis() == b.basis()) return a.basis();
  if (!a.basis()) return b.basis();
  if (!b.basis()) return a.basis();
  throw BasisMismatch();
}

ExactLength& ExactLength::operator+=(const ExactLength& o) {
  basis_ = common_basis(*this, o);
  for (std::size_t i = 0; i < kMaxBasis; ++i)
    if (!o.c_[i].is_zero()) c_[i] += o.c_[i];
  return *this;
}

ExactLength& ExactLength::operator-=(const ExactLength& o) {
  basis_ = common_basis(*this, o);
  for (std::size_t i = 0; i < kMaxBasis; ++i)
    if (!o.c_[i].is_zero()) c_[i] -= o.c_[i];
  return *this;
}

ExactLength& ExactLength::operator*=(const Rational& k) {
  for (auto& c : c_)
    if (!c.is_zero()) c *= k;
  return *this;
}

bool operator==(const ExactLength& a, const ExactLength& b) {
  if (a.basis_ != b.basis_ && a.basis_ && b.basis_) throw BasisMismatch();
  return a.c_ == b.c_;
}

std::string ExactLength::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (c_[i].is_zero()) continue;
    Rational c = c_[i];
    if (!first) os << (c.sign() < 0 ? "-" : "+");
    else if (c.sign() < 0) os << "-";
    c = abs(c);
    const std::string& name = (*basis_)[i].name;
    if (name == "1") os << c.str();
    else if (c == Rational(1)) os << name;
    else os << c.str() << "*" << name;
    first = false;
  }
  return os.str();
}

std::size_t ExactLength::hash() const {
  std::size_t h = 0;
  for (const auto& c : c_) h = h * 1000003u ^ std::hash<Rational>{}(c);
  return h;
}

ExactLength min(const ExactLength& a, const ExactLength& b) { return b < a ? b : a; }
ExactLength max(const ExactLength& a, const ExactLength& b) { return a < b ? b : a; }

}  // namespace qlc
