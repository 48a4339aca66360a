#pragma once

#include <random>
#include <string>
#include <vector>

#include "qlc/flc.hpp"
#include "qlc/measure.hpp"
#include "qlc/symbolic.hpp"

namespace qlc::test {

inline const Basis* unit() { return Basis::unit(); }
inline const Basis* golden() { return Basis::golden(); }

inline ExactLength L(const Basis* b, const std::string& s) { return ExactLength::parse(b, s); }
inline ExactLength L(const std::string& s) { return ExactLength::parse(Basis::golden(), s); }

// delta comb of unit atoms at 0, 1, ..., n-1 on [0, n)
inline MeasureWindow integer_comb(int n, const Basis* b = Basis::unit(), Rational weight = 1) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back({ExactLength::parse(b, std::to_string(i)), weight});
  return MeasureWindow(ExactLength(b), ExactLength::parse(b, std::to_string(n)), PieceContent::normalized(atoms, {}));
}

inline SuspensionParams fib_comb_params(Rational c = 1) {
  SuspensionParams sp;
  sp.profiles = {atom_piece(L("1"), c, "a"), atom_piece(L("phi"), c, "b")};
  return sp;
}

// Fibonacci comb: atom at the start of each cell, cells 1 (a) and phi (b).
inline MeasureWindow fibonacci_comb(std::size_t order, Rational c = 1) {
  return suspend_with_profiles(fibonacci_word(order), fib_comb_params(c));
}

inline PieceSet fib_comb_pieces(Rational c = 1) { return PieceSet(fib_comb_params(c).profiles); }

// Random atoms and steps on [0, len) over {1, phi}; positions are small
// combinations a + b*phi with halves.
inline ExactLength random_position(std::mt19937_64& rng, const ExactLength& len) {
  std::uniform_int_distribution<int> c(0, 12);
  for (;;) {
    ExactLength x = ExactLength(golden(), {Rational(c(rng), 2), Rational(c(rng) / 3, 2)});
    if (x < len) return x;
  }
}

inline PieceContent random_content(std::mt19937_64& rng, const ExactLength& len) {
  std::uniform_int_distribution<int> count(0, 4), w(-3, 3);
  std::vector<Atom> atoms;
  std::vector<Step> steps;
  for (int i = count(rng); i > 0; --i) atoms.push_back({random_position(rng, len), Rational(w(rng))});
  for (int i = count(rng); i > 0; --i) {
    ExactLength a = random_position(rng, len), b = random_position(rng, len);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    steps.push_back({a, b, Rational(w(rng), 2)});
  }
  return PieceContent::normalized(atoms, steps);
}

inline Piece random_piece(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> a(1, 6), b(0, 3);
  ExactLength len(golden(), {Rational(a(rng)), Rational(b(rng))});
  return Piece(len, random_content(rng, len));
}

}  // namespace qlc::test
