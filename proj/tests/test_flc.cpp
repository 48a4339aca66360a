#include <gtest/gtest.h>

#include <random>

#include "qlc/errors.hpp"
#include "qlc/flc.hpp"
#include "support.hpp"

using namespace qlc;
using namespace qlc::test;

namespace {

ExactLength U(const std::string& s) { return ExactLength::parse(Basis::unit(), s); }

// Zero measure cut as S L S S L S S S L ... (S = 1, L = phi).
Decomposition short_long_decomposition(int runs, MeasureWindow* window) {
  PieceSet ps({zero_piece(L("1"), "S"), zero_piece(L("phi"), "L")});
  std::vector<std::size_t> labels;
  for (int n = 1; n <= runs; ++n) {
    labels.insert(labels.end(), static_cast<std::size_t>(n), 0);
    labels.push_back(1);
  }
  Decomposition d{L("0"), labels, ps};
  *window = MeasureWindow(L("0"), d.end(), {});
  return d;
}

MeasureWindow random_subset_comb(std::mt19937_64& rng, int n) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i)
    if (rng() % 2) atoms.push_back({U(std::to_string(i)), 1});
  return MeasureWindow(U("0"), U(std::to_string(n)), PieceContent::normalized(atoms, {}));
}

std::vector<ExactLength> fibonacci_points(std::size_t order) {
  Word w = fibonacci_word(order);
  std::vector<ExactLength> pts;
  ExactLength x = L("0");
  for (int s : w.symbols) {
    pts.push_back(x);
    x += s == 0 ? L("1") : L("phi");
  }
  pts.push_back(x);
  return pts;
}

}  // namespace

TEST(Decompose, IntegerComb) {
  MeasureWindow w = integer_comb(10);
  Decomposition d = decompose(w, PieceSet({atom_piece(U("1"), 1, "d")}), U("0"));
  EXPECT_EQ(d.labels, std::vector<std::size_t>(10, 0));
}

TEST(Decompose, FibonacciSuspensionRecoversWord) {
  Word f = fibonacci_word(12);
  MeasureWindow w = suspend_with_profiles(f, fib_comb_params(3));
  Decomposition d = decompose(w, fib_comb_pieces(3), L("0"));
  EXPECT_EQ(std::vector<int>(d.labels.begin(), d.labels.end()), f.symbols);
}

TEST(Decompose, ZeroPieceCannotCoverComb) {
  EXPECT_THROW(decompose(integer_comb(10), PieceSet({zero_piece(U("1"))}), U("0")), NoDecomposition);
}

TEST(Decompose, MakeDecompositionChecksRoundTrip) {
  MeasureWindow w = integer_comb(4);
  PieceSet ps({atom_piece(U("1"), 1), zero_piece(U("1"))});
  EXPECT_NO_THROW(make_decomposition(w, ps, U("0"), {0, 0, 0, 0}));
  EXPECT_THROW(make_decomposition(w, ps, U("0"), {0, 1, 0, 0}), ValidationError);
}

TEST(Sfdp, PeriodicCombHolds) {
  MeasureWindow w = integer_comb(60);
  Decomposition d = decompose(w, PieceSet({atom_piece(U("1"), 1)}), U("0"));
  for (const char* ell : {"1", "3", "10", "20"}) EXPECT_TRUE(check_sfdp(w, d, U(ell)).ok) << ell;
}

TEST(Sfdp, ShortLongZeroMeasureFails) {
  MeasureWindow w;
  Decomposition d = short_long_decomposition(14, &w);
  SfdpResult r = check_sfdp(w, d, L("4"));
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.counterexample);
  EXPECT_NE(r.counterexample->next_length_y, r.counterexample->next_length_z);
  EXPECT_TRUE(r.counterexample->common_prefix_length >= L("4"));
}

TEST(Sfdp, TooShortWindowThrows) {
  MeasureWindow w = integer_comb(3);
  Decomposition d = decompose(w, PieceSet({atom_piece(U("1"), 1)}), U("0"));
  EXPECT_THROW(check_sfdp(w, d, U("5")), WindowTooShort);
}

TEST(Sfdp, FibonacciDeloneDecompositionHolds) {
  auto pts = fibonacci_points(12);
  Piece nu = step_piece(L("1"), L("0"), L("1"), 1);
  DeloneDecomposition dd = build_delone_decomposition(ColoredDeloneSet::monochrome(pts), nu);
  EXPECT_EQ(dd.decomposition.pieces.size(), 2u);
  EXPECT_TRUE(check_sfdp(dd.window, dd.decomposition, L("2*phi")).ok);
}

TEST(Udp, CombIsUnique) {
  EXPECT_TRUE(check_udp(integer_comb(20), PieceSet({atom_piece(U("1"), 1)}), U("1")).unique);
}

TEST(Udp, ZeroMeasureIsNeverUnique) {
  MeasureWindow w(L("0"), L("30"), {});
  PieceSet ps({zero_piece(L("1"), "S"), zero_piece(L("phi"), "L")});
  for (const char* r : {"1", "phi", "5"}) EXPECT_FALSE(check_udp(w, ps, L(r)).unique) << r;
}

TEST(Udp, FibonacciCombIsUnique) {
  UdpResult r = check_udp(fibonacci_comb(12), fib_comb_pieces(), L("2*phi"));
  EXPECT_TRUE(r.unique);
  EXPECT_GT(r.positions_checked, 100u);
}

TEST(Flp, CombHasOnePatch) {
  std::vector<ExactLength> ls{U("2")};
  FlpReport r = check_flp(integer_comb(30), U("1"), ls);
  EXPECT_EQ(r.patch_counts[0].second, 1u);
}

TEST(Flp, RandomSubsetOfIntegersIsBounded) {
  std::mt19937_64 rng(5);
  std::vector<ExactLength> ls{U("3")};
  FlpReport r = check_flp(random_subset_comb(rng, 400), U("1"), ls);
  // a patch is a subset of the 6 lattice points in [x - 3, x + 3)
  EXPECT_LE(r.patch_counts[0].second, 64u);
  EXPECT_GT(r.patch_counts[0].second, 4u);
}

TEST(Flp, DistinctGapsGrowWithWindow) {
  // gaps 1 + k/1000 are pairwise distinct and bounded, so no finite patch list suffices
  auto comb = [](int n) {
    std::vector<Atom> atoms;
    Rational x = 0;
    for (int k = 1; k <= n; ++k) {
      atoms.push_back({U(x.str()), 1});
      x += Rational(1) + Rational(k, 1000);
    }
    return MeasureWindow(U("0"), U(x.str()), PieceContent::normalized(atoms, {}));
  };
  std::vector<ExactLength> ls{U("4")};
  std::size_t small = check_flp(comb(40), U("1"), ls).patch_counts[0].second;
  std::size_t large = check_flp(comb(160), U("1"), ls).patch_counts[0].second;
  EXPECT_GT(large, small + 50);
}

TEST(Fep, CombHasOneExtension) {
  FepReport r = check_fep(integer_comb(40), U("1"), U("2"));
  EXPECT_EQ(r.extension_set_size, 1u);
  EXPECT_EQ(r.max_extensions_per_prefix, 1u);
}

TEST(Fep, RandomSubsetHarvestIsFinite) {
  std::mt19937_64 rng(9);
  FepReport r = check_fep(random_subset_comb(rng, 400), U("1"), U("2"));
  // extensions are subsets of two lattice points
  EXPECT_LE(r.extension_set_size, 4u);
  EXPECT_GE(r.max_extensions_per_prefix, 2u);
  EXPECT_LE(r.max_extensions_per_prefix, 4u);
}

TEST(Fep, FibonacciAtMostTwoExtensionsPerPrefix) {
  FepReport r = check_fep(fibonacci_comb(14), L("1"), L("2"));
  EXPECT_LE(r.max_extensions_per_prefix, 2u);
  EXPECT_GE(r.prefixes_checked, 100u);
}

TEST(Recode, FibonacciPilot) {
  MeasureWindow w = fibonacci_comb(14);
  Piece pilot(L("1+phi"), PieceContent::normalized({{L("0"), 1}, {L("1"), 1}}, {}), "ab");
  Recoding r = recode_by_occurrences(w, PieceSet({pilot}));
  EXPECT_LE(r.decomposition.pieces.size(), 3u);
  EXPECT_GE(r.occurrence_points.size(), 100u);
}

TEST(Recode, CombGivesIntegerGrid) {
  Recoding r = recode_by_occurrences(integer_comb(20), PieceSet({atom_piece(U("1"), 1)}));
  EXPECT_EQ(r.decomposition.pieces.size(), 1u);
  EXPECT_EQ(r.decomposition.x0, U("0"));
  EXPECT_EQ(r.occurrence_points.size(), 20u);
}

TEST(Recode, ConstantDensityAccumulates) {
  MeasureWindow w(U("0"), U("10"), PieceContent::normalized({}, {{U("0"), U("10"), 1}}));
  EXPECT_THROW(recode_by_occurrences(w, PieceSet({step_piece(U("1"), U("0"), U("1"), 1)})), AccumulatingOccurrences);
}

TEST(Recode, SparsePilotIsNotRelativelyDense) {
  std::vector<Atom> atoms{{U("0"), 1}, {U("1"), 1}, {U("90"), 1}};
  MeasureWindow w(U("0"), U("100"), PieceContent::normalized(atoms, {}));
  EXPECT_THROW(recode_by_occurrences(w, PieceSet({atom_piece(U("1"), 1)})), NotRelativelyDense);
}

TEST(DeloneDecomposition, IntegerDelta) {
  std::vector<ExactLength> pts;
  for (int i = 0; i <= 30; ++i) pts.push_back(U(std::to_string(i)));
  DeloneDecomposition dd = build_delone_decomposition(ColoredDeloneSet::monochrome(pts), atom_piece(U("1"), 1));
  EXPECT_EQ(dd.decomposition.pieces.size(), 1u);
  EXPECT_EQ(dd.decomposition.pieces[0], atom_piece(U("1"), 1));
}

TEST(DeloneDecomposition, IntegerOverlappingStep) {
  std::vector<ExactLength> pts;
  for (int i = 0; i <= 30; ++i) pts.push_back(U(std::to_string(i)));
  DeloneDecomposition dd =
      build_delone_decomposition(ColoredDeloneSet::monochrome(pts), step_piece(U("3/2"), U("0"), U("3/2"), 1));
  ASSERT_EQ(dd.decomposition.pieces.size(), 1u);
  // the tail of the previous profile overlaps the first half of each cell
  std::vector<Step> want{{U("0"), U("1/2"), 2}, {U("1/2"), U("1"), 1}};
  EXPECT_EQ(dd.decomposition.pieces[0].content.steps(), want);
  EXPECT_EQ(dd.support_extent, U("3/2"));
}

TEST(Period, Comb) {
  auto p = detect_eventual_period(integer_comb(50));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->x0, U("0"));
  EXPECT_EQ(p->period, U("1"));
}

TEST(Period, JunkThenComb) {
  std::vector<Atom> atoms{{U("1/3"), 7}, {U("2"), -1}, {U("9/2"), 2}};
  for (int i = 5; i < 60; ++i) atoms.push_back({U(std::to_string(i)), 1});
  MeasureWindow w(U("0"), U("60"), PieceContent::normalized(atoms, {{U("1"), U("3"), 1}}));
  auto p = detect_eventual_period(w);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->x0, U("5"));
  EXPECT_EQ(p->period, U("1"));
}

TEST(Period, FibonacciHasNone) {
  MeasureWindow w = sub_window(fibonacci_comb(14), L("0"), L("200"));
  EXPECT_FALSE(detect_eventual_period(w));
}

TEST(DeloneMeasure, Verdicts) {
  std::vector<Piece> delta{atom_piece(U("1"), 1)};
  EXPECT_TRUE(check_delone_measure_flc(integer_comb(20), delta).verdict());
  std::vector<Piece> gdelta{atom_piece(L("1"), 1)};
  EXPECT_TRUE(check_delone_measure_flc(fibonacci_comb(12), gdelta).verdict());
  MeasureWindow flat(U("0"), U("10"), PieceContent::normalized({}, {{U("0"), U("10"), 1}}));
  EXPECT_FALSE(check_delone_measure_flc(flat, delta).verdict());
}

// ---------------------------------------------------------------- properties

// A unique decomposition determines the next piece from a collar, so s.f.d.p
// must hold for the decomposition the checker found.
TEST(FlcProperty, UdpImpliesSfdp) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Word w = bernoulli_word(0.4, rng(), 150);
    SuspensionParams sp;
    sp.profiles = {atom_piece(L("1"), 1, "0"), atom_piece(L("phi"), 2, "1")};
    MeasureWindow win = suspend_with_profiles(w, sp);
    PieceSet ps(sp.profiles);
    if (!check_udp(win, ps, L("phi")).unique) continue;
    Decomposition d = decompose(win, ps, L("0"));
    ASSERT_TRUE(check_sfdp(win, d, L("2*phi")).ok);
  }
}

TEST(FlcProperty, EventuallyPeriodicHasSfdp) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Word junk = bernoulli_word(0.5, rng(), 6);
    std::vector<int> syms = junk.symbols;
    std::vector<int> block{0, 1, 1};
    for (int k = 0; k < 30; ++k) syms.insert(syms.end(), block.begin(), block.end());
    Word w(syms, {"0", "1"});
    SuspensionParams sp;
    sp.profiles = {atom_piece(L("1"), 1, "0"), atom_piece(L("phi"), 1, "1")};
    MeasureWindow win = suspend_with_profiles(w, sp);
    auto per = detect_eventual_period(win);
    ASSERT_TRUE(per);
    EXPECT_EQ(per->period, L("1+2*phi"));
    Decomposition d = decompose(win, PieceSet(sp.profiles), per->x0);
    ASSERT_TRUE(check_sfdp(win, d, L("1+2*phi")).ok);
  }
}

TEST(FlcProperty, RecodingIsUniquelyDecodable) {
  for (std::size_t order : {12u, 13u, 14u}) {
    MeasureWindow w = fibonacci_comb(order);
    Piece pilot(L("1+phi"), PieceContent::normalized({{L("0"), 1}, {L("1"), 1}}, {}), "ab");
    Recoding r = recode_by_occurrences(w, PieceSet({pilot}));
    MeasureWindow tail = sub_window(w, r.decomposition.x0, r.decomposition.end());
    EXPECT_TRUE(check_udp(tail, r.decomposition.pieces, r.max_gap + r.pilot_length).unique) << order;
  }
}
