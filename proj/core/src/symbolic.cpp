#include "qlc/symbolic.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "qlc/errors.hpp"
#include "qlc/parallel.hpp"

namespace qlc {
namespace {

namespace mp = boost::multiprecision;
using Dec50 = mp::cpp_dec_float_50;

std::optional<std::int64_t> as_integer(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
  return std::stoll(s);
}

bool is_plain_decimal(const std::string& s) {
  bool dot = false, digit = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !dot) dot = true;
    else if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (!(i == 0 && (c == '-' || c == '+'))) return false;
  }
  return digit;
}

std::string strip_ellipsis(const std::string& s) {
  return s.size() > 3 && s.ends_with("...") ? s.substr(0, s.size() - 3) : s;
}

// Decimal string -> exact rational (digits / 10^k) and k.
std::pair<mp::cpp_rational, std::size_t> decimal_to_rational(const std::string& text) {
  const std::string s = strip_ellipsis(text);
  if (!is_plain_decimal(s)) throw ValidationError("not a decimal number: '" + s + "'");
  bool neg = s[0] == '-';
  std::string digits;
  std::size_t frac = 0;
  bool after = false;
  for (char c : s) {
    if (c == '.') after = true;
    else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (after) ++frac;
    }
  }
  // cpp_int reads a leading 0 as octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  mp::cpp_int num(digits.empty() ? "0" : digits);
  mp::cpp_int den = mp::pow(mp::cpp_int(10), static_cast<unsigned>(frac));
  mp::cpp_rational r(num, den);
  return {neg ? mp::cpp_rational(-r) : r, frac};
}

mp::cpp_int rational_floor(const mp::cpp_rational& x) {
  mp::cpp_int n = mp::numerator(x), d = mp::denominator(x);
  mp::cpp_int q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

void fill_kaminaga(CFExpansion& cf) {
  cf.kaminaga_positions.clear();
  for (std::size_t k = 0; k < cf.a.size(); ++k)
    if (cf.a[k] >= 4) cf.kaminaga_positions.push_back(k + 1);
}

}  // namespace

// ---------------------------------------------------------------------------

Word::Word(std::vector<int> syms, std::vector<std::string> alpha, std::ptrdiff_t origin_index)
    : symbols(std::move(syms)), origin(origin_index), alphabet(std::move(alpha)) {
  if (alphabet.empty()) throw ValidationError("word alphabet is empty");
  for (int s : symbols)
    if (s < 0 || static_cast<std::size_t>(s) >= alphabet.size()) throw ValidationError("symbol outside the alphabet");
  if (origin < 0 || (origin > 0 && static_cast<std::size_t>(origin) >= symbols.size()))
    throw ValidationError("word origin outside the word");
}

Rational Word::weight(int symbol) const {
  if (auto v = as_integer(alphabet.at(static_cast<std::size_t>(symbol)))) return Rational(*v);
  return Rational(symbol + 1);
}

std::string Word::str() const {
  bool single = std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& a) { return a.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!single && i) out += ' ';
    out += alphabet[static_cast<std::size_t>(symbols[i])];
  }
  return out;
}

Word make_word(const std::string& letters) {
  std::set<char> seen(letters.begin(), letters.end());
  std::vector<std::string> alpha;
  for (char c : seen) alpha.emplace_back(1, c);
  std::vector<int> syms;
  for (char c : letters) syms.push_back(static_cast<int>(std::distance(seen.begin(), seen.find(c))));
  return Word(std::move(syms), std::move(alpha));
}

Substitution Substitution::parse(const std::vector<std::pair<std::string, std::string>>& rules) {
  Substitution s;
  for (const auto& [from, to] : rules) {
    if (from.size() != 1) throw ValidationError("substitution letters must be single characters: '" + from + "'");
    if (s.index_of(from)) throw ValidationError("letter '" + from + "' has two rules");
    s.alphabet.push_back(from);
  }
  for (const auto& [from, to] : rules) {
    if (to.empty()) throw ValidationError("erasing rule for '" + from + "'");
    std::vector<int> img;
    for (char c : to) {
      auto idx = s.index_of(std::string(1, c));
      if (!idx) throw ValidationError("rule image uses unknown letter '" + std::string(1, c) + "'");
      img.push_back(*idx);
    }
    s.images.push_back(std::move(img));
  }
  return s;
}

Substitution Substitution::fibonacci() { return parse({{"a", "ab"}, {"b", "a"}}); }
Substitution Substitution::thue_morse() { return parse({{"a", "ab"}, {"b", "ba"}}); }

std::optional<int> Substitution::index_of(const std::string& letter) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == letter) return static_cast<int>(i);
  return std::nullopt;
}

Word substitution_word(const Substitution& s, const std::string& seed, std::size_t iterations,
                       std::optional<std::size_t> max_length, bool fixed_point) {
  auto start = s.index_of(seed);
  if (!start) throw ValidationError("seed '" + seed + "' is not a letter of the substitution");
  const auto& img = s.images[static_cast<std::size_t>(*start)];
  if (fixed_point && (img.size() < 2 || img.front() != *start))
    throw ValidationError("seed '" + seed + "' does not extend under the substitution; no fixed point");
  std::vector<int> cur{*start};
  for (std::size_t it = 0; it < iterations; ++it) {
    if (fixed_point && max_length && cur.size() >= *max_length) break;
    std::vector<int> next;
    for (int c : cur) {
      const auto& im = s.images[static_cast<std::size_t>(c)];
      next.insert(next.end(), im.begin(), im.end());
    }
    cur = std::move(next);
  }
  if (max_length && cur.size() > *max_length) cur.resize(*max_length);
  return Word(std::move(cur), s.alphabet);
}

Word fibonacci_word(std::size_t order) {
  if (order == 0) return Word({1}, {"a", "b"});
  return substitution_word(Substitution::fibonacci(), "a", order - 1);
}

std::uint64_t fibonacci_number(std::size_t n) {
  std::uint64_t a = 0, b = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t t = a + b;
    a = b;
    b = t;
  }
  return a;
}

CircleMapResult circle_map_word(const Quadratic& alpha, const Quadratic& beta, std::int64_t m, std::int64_t n_last) {
  if (n_last < m) throw ValidationError("circle map range is empty");
  if (alpha.sign() <= 0 || !(alpha < Quadratic(Rational(1)))) throw ValidationError("alpha must lie in (0,1)");
  if (beta.sign() <= 0 || !(beta < Quadratic(Rational(1)))) throw ValidationError("beta must lie in (0,1)");
  CircleMapResult res;
  res.periodic = alpha.is_rational();
  const Quadratic threshold = Quadratic(Rational(1)) - beta;
  std::vector<int> syms;
  syms.reserve(static_cast<std::size_t>(n_last - m + 1));
  for (std::int64_t n = m; n <= n_last; ++n) {
    Quadratic f = (Quadratic(Rational(n)) * alpha).frac();
    syms.push_back(threshold < f ? 1 : 0);
  }
  std::ptrdiff_t origin = m <= 0 && n_last >= 0 ? static_cast<std::ptrdiff_t>(-m) : 0;
  res.word = Word(std::move(syms), {"0", "1"}, origin);
  return res;
}

CircleMapResult circle_map_word(const std::string& alpha, const std::string& beta, std::int64_t m,
                                std::int64_t n_last) {
  std::optional<Quadratic> qa, qb;
  try {
    qa = Quadratic::parse(alpha);
    qb = Quadratic::parse(beta);
  } catch (const std::exception&) {
    qa.reset();
    qb.reset();
  }
  if (qa && qb && (qa->is_rational() || qb->is_rational() || qa->radicand() == qb->radicand()))
    return circle_map_word(*qa, *qb, m, n_last);

  if (n_last < m) throw ValidationError("circle map range is empty");
  Dec50 a(decimal_to_rational(alpha).first), b(decimal_to_rational(beta).first);
  if (a <= 0 || a >= 1) throw ValidationError("alpha must lie in (0,1)");
  if (b <= 0 || b >= 1) throw ValidationError("beta must lie in (0,1)");
  const Dec50 guard("1e-15");
  const Dec50 threshold = Dec50(1) - b;
  std::vector<int> syms;
  for (std::int64_t n = m; n <= n_last; ++n) {
    Dec50 x = a * n;
    Dec50 f = x - mp::floor(x);
    if (mp::abs(f - threshold) < guard || (f != 0 && (f < guard || Dec50(1) - f < guard)))
      throw ValidationError("circle map position n=" + std::to_string(n) +
                            " is within 1e-15 of the interval boundary; give alpha and beta exactly");
    syms.push_back(f > threshold ? 1 : 0);
  }
  CircleMapResult res;
  std::ptrdiff_t origin = m <= 0 && n_last >= 0 ? static_cast<std::ptrdiff_t>(-m) : 0;
  res.word = Word(std::move(syms), {"0", "1"}, origin);
  return res;
}

Word bernoulli_word(double p, std::uint64_t seed, std::size_t n) {
  if (!(p > 0 && p < 1)) throw ValidationError("bernoulli p must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::vector<int> syms(n);
  for (auto& s : syms) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    s = u < p ? 0 : 1;
  }
  return Word(std::move(syms), {"0", "1"});
}

std::vector<std::pair<std::int64_t, std::int64_t>> CFExpansion::convergents() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  __int128 p2 = 1, q2 = 0, p1 = a0, q1 = 1;
  out.emplace_back(a0, 1);
  const __int128 lim = INT64_MAX;
  for (auto ak : a) {
    __int128 p = ak * p1 + p2, q = ak * q1 + q2;
    if (p > lim || q > lim || p < -lim) break;
    out.emplace_back(static_cast<std::int64_t>(p), static_cast<std::int64_t>(q));
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return out;
}

std::vector<std::int64_t> CFExpansion::denominators() const {
  std::vector<std::int64_t> q;
  for (const auto& c : convergents()) q.push_back(c.second);
  return q;
}

CFExpansion continued_fraction(const Quadratic& alpha, std::size_t n) {
  if (n < 1) throw ValidationError("need at least one coefficient");
  CFExpansion cf;
  cf.requested = n;
  cf.a0 = alpha.floor();
  Quadratic x = alpha - Quadratic(Rational(cf.a0));
  while (cf.a.size() < n) {
    if (x.sign() == 0) {
      cf.terminated = true;
      break;
    }
    Quadratic inv = Quadratic(Rational(1)) / x;
    std::int64_t ak = inv.floor();
    cf.a.push_back(ak);
    x = inv - Quadratic(Rational(ak));
  }
  fill_kaminaga(cf);
  return cf;
}

CFExpansion continued_fraction_decimal(const std::string& digits, std::size_t n) {
  if (n < 1) throw ValidationError("need at least one coefficient");
  auto [lo, k] = decimal_to_rational(digits);
  mp::cpp_rational hi = lo + mp::cpp_rational(1, mp::pow(mp::cpp_int(10), static_cast<unsigned>(k)));
  CFExpansion cf;
  cf.requested = n;
  mp::cpp_int f_lo = rational_floor(lo), f_hi = rational_floor(hi);
  if (f_lo != f_hi) throw PrecisionExhausted("not even the integer part of " + digits + " is determined", 0);
  cf.a0 = static_cast<std::int64_t>(f_lo);
  lo -= f_lo;
  hi -= f_lo;
  while (cf.a.size() < n) {
    if (lo == 0 || hi == 0) break;
    mp::cpp_rational il = 1 / lo, ih = 1 / hi;
    mp::cpp_int al = rational_floor(il), ah = rational_floor(ih);
    if (al != ah) break;
    cf.a.push_back(static_cast<std::int64_t>(al));
    lo = il - al;
    hi = ih - ah;
  }
  fill_kaminaga(cf);
  if (cf.a.size() < n) {
    throw PrecisionExhausted("only " + std::to_string(cf.a.size()) + " of " + std::to_string(n) +
                                 " coefficients are determined by the digits of " + digits,
                             cf.a.size());
  }
  return cf;
}

CFExpansion continued_fraction(const std::string& alpha, std::size_t n) {
  std::optional<Quadratic> q;
  if (alpha.ends_with("...")) return continued_fraction_decimal(alpha, n);
  try {
    q = Quadratic::parse(alpha);
  } catch (const std::exception&) {
  }
  if (q) return continued_fraction(*q, n);
  return continued_fraction_decimal(alpha, n);
}

std::size_t count_occurrences(std::span<const int> v, std::span<const int> w) {
  if (v.empty()) throw ValidationError("pattern must be nonempty");
  if (v.size() > w.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + v.size() <= w.size(); ++i)
    if (std::equal(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
  return count;
}

std::size_t count_occurrences(const Word& v, const Word& w) {
  // compare by letter names so that alphabets need not agree
  std::vector<int> vs, ws;
  std::map<std::string, int> ids;
  auto id = [&](const std::string& s) { return ids.try_emplace(s, static_cast<int>(ids.size())).first->second; };
  for (int s : w.symbols) ws.push_back(id(w.alphabet[static_cast<std::size_t>(s)]));
  for (int s : v.symbols) vs.push_back(id(v.alphabet[static_cast<std::size_t>(s)]));
  return count_occurrences(vs, ws);
}

std::vector<GordonReport> gordon_scan(const Word& w, std::span<const std::int64_t> p_list, unsigned threads) {
  std::vector<GordonReport> out;
  for (auto p : p_list) {
    if (p < 1) throw ValidationError("block length p must be positive");
    const std::ptrdiff_t lo = w.first_position() + p, hi = w.end_position() - 2 * p;  // t in [lo, hi]
    if (hi < lo)
      throw InsufficientWindow("word of length " + std::to_string(w.size()) + " cannot hold three blocks of length " +
                               std::to_string(p));
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<char> hit(count, 0);
    const int* base = w.symbols.data() + w.origin;
    parallel_for(count, threads, [&](std::size_t i) {
      std::ptrdiff_t t = lo + static_cast<std::ptrdiff_t>(i);
      hit[i] = std::equal(base + t - p, base + t, base + t) && std::equal(base + t, base + t + p, base + t + p);
    });
    GordonReport r;
    r.p = p;
    r.tested = count;
    for (std::size_t i = 0; i < count; ++i)
      if (hit[i]) r.hit_origins.push_back(lo + static_cast<std::ptrdiff_t>(i));
    r.hits = r.hit_origins.size();
    r.density = static_cast<double>(r.hits) / static_cast<double>(count);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::vector<ExactLength> cell_offsets(const Word& w, std::span<const ExactLength> lengths) {
  if (lengths.size() != w.alphabet.size())
    throw ValidationError("need one length per alphabet symbol (" + std::to_string(w.alphabet.size()) + ")");
  for (const auto& l : lengths)
    if (l.sign() <= 0) throw ValidationError("suspension lengths must be positive");
  std::vector<ExactLength> off(w.size() + 1, ExactLength(lengths[0].basis()));
  for (std::size_t j = 0; j < w.size(); ++j) off[j + 1] = off[j] + lengths[static_cast<std::size_t>(w.symbols[j])];
  const ExactLength zero = off[static_cast<std::size_t>(w.origin)];
  for (auto& x : off) x -= zero;
  return off;
}

}  // namespace

MeasureWindow suspend(const Word& w, std::span<const ExactLength> lengths) {
  if (w.size() == 0) throw ValidationError("cannot suspend an empty word");
  auto off = cell_offsets(w, lengths);
  std::vector<Atom> atoms;
  atoms.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    Rational wt = w.weight(w.symbols[j]);
    if (!wt.is_zero()) atoms.push_back({off[j], wt});
  }
  return MeasureWindow(off.front(), off.back(), PieceContent::normalized(std::move(atoms), {}));
}

SuspensionParams SuspensionParams::from_supports(std::span<const PieceContent> contents, const Basis* basis) {
  SuspensionParams sp;
  for (std::size_t j = 0; j < contents.size(); ++j) {
    const PieceContent& c = contents[j];
    auto lo = c.support_min();
    if (!lo || !lo->is_zero()) throw ValidationError("profile " + std::to_string(j) + " must have min supp = 0");
    ExactLength len;
    if (c.steps().empty() && c.atoms().size() == 1) {
      if (!basis->index_of("1")) throw ValidationError("basis needs an element named '1' for point profiles");
      len = ExactLength::parse(basis, "1");
    } else {
      len = *c.support_max();
      if (!c.atoms().empty() && c.atoms().back().at == len)
        throw ValidationError("profile " + std::to_string(j) +
                              " ends in an atom at sup supp; cells are half-open, give the length explicitly");
    }
    sp.profiles.emplace_back(len, c);
  }
  sp.validate();
  return sp;
}

void SuspensionParams::validate() const {
  if (profiles.empty()) throw ValidationError("no suspension profiles");
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    const Piece& p = profiles[j];
    if (p.len.basis() != profiles[0].len.basis()) throw BasisMismatch();
    auto lo = p.content.support_min();
    if (!lo || !lo->is_zero()) throw ValidationError("profile " + std::to_string(j) + " must have min supp = 0");
  }
}

bool SuspensionParams::sfdp_guaranteed() const {
  return std::count_if(profiles.begin(), profiles.end(), [](const Piece& p) { return p.is_lebesgue_multiple(); }) <= 1;
}

std::vector<ExactLength> SuspensionParams::lengths() const {
  std::vector<ExactLength> out;
  for (const auto& p : profiles) out.push_back(p.len);
  return out;
}

MeasureWindow suspend_with_profiles(const Word& w, const SuspensionParams& params) {
  params.validate();
  if (w.size() == 0) throw ValidationError("cannot suspend an empty word");
  auto lens = params.lengths();
  auto off = cell_offsets(w, lens);
  std::vector<Atom> atoms;
  std::vector<Step> steps;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const Piece& prof = params.profiles[static_cast<std::size_t>(w.symbols[j])];
    for (const auto& a : prof.content.atoms()) atoms.push_back({a.at + off[j], a.weight});
    for (const auto& s : prof.content.steps()) steps.push_back({s.start + off[j], s.end + off[j], s.value});
  }
  return MeasureWindow(off.front(), off.back(), PieceContent::normalized(std::move(atoms), std::move(steps)));
}

SuspensionParams fibonacci_kp_params(const Rational& c) {
  const Basis* g = Basis::golden();
  SuspensionParams sp;
  sp.profiles.push_back(atom_piece(ExactLength(g, {Rational(1)}), c, "a"));
  sp.profiles.push_back(atom_piece(ExactLength(g, {Rational(0), Rational(1)}), c, "b"));
  return sp;
}

void write_word(std::ostream& os, const Word& w, const std::map<std::string, std::string>& extra) {
  os << "#word alphabet=";
  for (std::size_t i = 0; i < w.alphabet.size(); ++i) os << (i ? "," : "") << w.alphabet[i];
  os << " origin=" << w.origin << " length=" << w.size();
  for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
  os << '\n';
  for (std::size_t i = 0; i < w.size(); ++i) {
    os << w.alphabet[static_cast<std::size_t>(w.symbols[i])];
    os << ((i + 1) % 64 == 0 || i + 1 == w.size() ? '\n' : ' ');
  }
}

WordFile read_word(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("#word", 0) != 0) throw ValidationError("word file must start with '#word'");
  WordFile wf;
  std::istringstream hs(header.substr(5));
  std::string kv;
  while (hs >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed word header field '" + kv + "'");
    wf.header[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!wf.header.contains("alphabet")) throw ValidationError("word header lacks alphabet");
  std::vector<std::string> alpha;
  {
    std::string a = wf.header["alphabet"], tok;
    std::istringstream as(a);
    while (std::getline(as, tok, ',')) alpha.push_back(tok);
  }
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < alpha.size(); ++i) idx[alpha[i]] = static_cast<int>(i);
  std::vector<int> syms;
  std::string tok;
  while (is >> tok) {
    auto it = idx.find(tok);
    if (it == idx.end()) throw ValidationError("symbol '" + tok + "' not in the declared alphabet");
    syms.push_back(it->second);
  }
  std::ptrdiff_t origin = 0;
  if (wf.header.contains("origin")) origin = std::stoll(wf.header["origin"]);
  if (wf.header.contains("length") && std::stoull(wf.header["length"]) != syms.size())
    throw ValidationError("word length does not match the header");
  wf.word = Word(std::move(syms), std::move(alpha), origin);
  return wf;
}

}  // namespace qlc
