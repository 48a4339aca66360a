#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlc/exact.hpp"
#include "qlc/measure.hpp"
#include "qlc/quadratic.hpp"

namespace qlc {

// Symbols are indices into `alphabet`. Position 0 of the (two-sided) word is
// symbols[origin].
struct Word {
  std::vector<int> symbols;
  std::ptrdiff_t origin = 0;
  std::vector<std::string> alphabet;

  Word() = default;
  Word(std::vector<int> syms, std::vector<std::string> alpha, std::ptrdiff_t origin_index = 0);

  std::size_t size() const { return symbols.size(); }
  // Position relative to the origin.
  int at(std::ptrdiff_t pos) const { return symbols[static_cast<std::size_t>(pos + origin)]; }
  std::ptrdiff_t first_position() const { return -origin; }
  std::ptrdiff_t end_position() const { return static_cast<std::ptrdiff_t>(symbols.size()) - origin; }

  // Numeric value of a symbol: its name if that is an integer, else index+1.
  Rational weight(int symbol) const;
  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
};

Word make_word(const std::string& letters);  // "abaab": alphabet in order of first appearance, sorted

struct Substitution {
  std::vector<std::string> alphabet;
  std::vector<std::vector<int>> images;

  // {{"a","ab"},{"b","a"}}: single-character letters.
  static Substitution parse(const std::vector<std::pair<std::string, std::string>>& rules);
  static Substitution fibonacci();
  static Substitution thue_morse();
  std::optional<int> index_of(const std::string& letter) const;
};

// `iterations` applications of the substitution to `seed`, optionally cut at
// max_length. fixed_point mode requires image(seed) to start with seed and be
// longer than one letter.
Word substitution_word(const Substitution& s, const std::string& seed, std::size_t iterations,
                       std::optional<std::size_t> max_length = std::nullopt, bool fixed_point = false);

// Order-k Fibonacci word: s_0 = b, s_1 = a, s_{k+1} = s_k s_{k-1}; |s_k| = F_{k+1}.
Word fibonacci_word(std::size_t order);
std::uint64_t fibonacci_number(std::size_t n);  // F_1 = F_2 = 1

struct CircleMapResult {
  Word word;
  bool periodic = false;  // alpha rational
};

// V(n) = 1 iff frac(n*alpha) lies in (1 - beta, 1], for n in [m, n_last].
CircleMapResult circle_map_word(const Quadratic& alpha, const Quadratic& beta, std::int64_t m, std::int64_t n_last);
// Accepts exact expressions ("sqrt5-2", "phi-1", "0.25") or long decimals;
// the latter are evaluated with 50 significant digits and a 1e-15 boundary guard.
CircleMapResult circle_map_word(const std::string& alpha, const std::string& beta, std::int64_t m,
                                std::int64_t n_last);

Word bernoulli_word(double p, std::uint64_t seed, std::size_t n);

struct CFExpansion {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> a;  // a_1, a_2, ...
  std::size_t requested = 0;
  bool terminated = false;  // rational input ran out of coefficients
  std::vector<std::size_t> kaminaga_positions;  // k (1-based) with a_k >= 4

  std::size_t kaminaga_count() const { return kaminaga_positions.size(); }
  // (p_k, q_k) for k = 0.. as long as they fit in int64.
  std::vector<std::pair<std::int64_t, std::int64_t>> convergents() const;
  std::vector<std::int64_t> denominators() const;
};

CFExpansion continued_fraction(const Quadratic& alpha, std::size_t n);
// Decimal digits "0.2360679..." are an interval [d, d + 10^-k]; only the
// coefficients shared by both ends are trusted. Throws PrecisionExhausted when
// fewer than n are trusted.
CFExpansion continued_fraction_decimal(const std::string& digits, std::size_t n);
// Text ending in "..." is a truncated decimal; anything else must parse as an
// exact expression (plain literals like "0.25" are exact rationals).
CFExpansion continued_fraction(const std::string& alpha, std::size_t n);

std::size_t count_occurrences(std::span<const int> v, std::span<const int> w);
std::size_t count_occurrences(const Word& v, const Word& w);

struct GordonReport {
  std::int64_t p = 0;
  std::size_t tested = 0;
  std::size_t hits = 0;
  double density = 0;
  std::vector<std::ptrdiff_t> hit_origins;
};

// For every shifted origin t with [t-p, t+2p) inside the word, tests
// x(t-p..t-1) = x(t..t+p-1) = x(t+p..t+2p-1).
std::vector<GordonReport> gordon_scan(const Word& w, std::span<const std::int64_t> p_list, unsigned threads = 1);

// Point-mass suspension: atom of weight x(j) at the cumulative offset of j,
// with the origin symbol at 0.
MeasureWindow suspend(const Word& w, std::span<const ExactLength> lengths);

// Per-symbol profiles, each a Piece whose length is the cell length l_j.
struct SuspensionParams {
  std::vector<Piece> profiles;

  // Applies l_j = sup supp(nu_j), or 1 for a pure point mass at 0.
  static SuspensionParams from_supports(std::span<const PieceContent> contents, const Basis* basis);
  void validate() const;
  // At most one profile is a multiple of Lebesgue measure; otherwise the
  // suspension may lack s.f.d.p (it is still built).
  bool sfdp_guaranteed() const;
  std::vector<ExactLength> lengths() const;
};

MeasureWindow suspend_with_profiles(const Word& w, const SuspensionParams& params);
// Fibonacci Kronig-Penney comb: atom c at 0 in cells of length 1 (a) and phi (b).
SuspensionParams fibonacci_kp_params(const Rational& c);

struct WordFile {
  Word word;
  std::map<std::string, std::string> header;
};

void write_word(std::ostream& os, const Word& w, const std::map<std::string, std::string>& extra = {});
WordFile read_word(std::istream& is);

}  // namespace qlc
