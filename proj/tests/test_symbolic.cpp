#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qlc/errors.hpp"
#include "qlc/symbolic.hpp"
#include "support.hpp"

using namespace qlc;
using namespace qlc::test;

namespace {

std::vector<int> bits(const Word& w) {
  std::vector<int> out;
  for (int s : w.symbols) out.push_back(std::stoi(w.alphabet[static_cast<std::size_t>(s)]));
  return out;
}

}  // namespace

TEST(Substitution, FibonacciFiveIterations) {
  Word w = substitution_word(Substitution::fibonacci(), "a", 5);
  EXPECT_EQ(w.str(), "abaababaabaab");
}

TEST(Substitution, ThueMorse) {
  Word w = substitution_word(Substitution::thue_morse(), "a", 4);
  EXPECT_EQ(w.str(), "abbabaabbaababba");
}

TEST(Substitution, IdentityIsConstant) {
  Word w = substitution_word(Substitution::parse({{"a", "a"}}), "a", 7);
  EXPECT_EQ(w.str(), "a");
  EXPECT_THROW(substitution_word(Substitution::parse({{"a", "a"}}), "a", 7, std::nullopt, true), ValidationError);
}

TEST(Substitution, MaxLengthCuts) {
  Word w = substitution_word(Substitution::fibonacci(), "a", 20, 100);
  EXPECT_EQ(w.size(), 100u);
  EXPECT_EQ(w.str().substr(0, 13), "abaababaabaab");
}

TEST(Fibonacci, OrderConvention) {
  EXPECT_EQ(fibonacci_word(0).str(), "b");
  EXPECT_EQ(fibonacci_word(1).str(), "a");
  EXPECT_EQ(fibonacci_word(2).str(), "ab");
  EXPECT_EQ(fibonacci_word(10).size(), 89u);
  for (std::size_t k = 1; k < 25; ++k) EXPECT_EQ(fibonacci_word(k).size(), fibonacci_number(k + 1));
}

TEST(CircleMap, InverseGoldenMean) {
  auto r = circle_map_word(Quadratic::parse("phi-1"), Quadratic::parse("phi-1"), 0, 4);
  EXPECT_EQ(bits(r.word), (std::vector<int>{0, 1, 0, 1, 1}));
  EXPECT_FALSE(r.periodic);
}

TEST(CircleMap, SqrtFiveMinusTwoMatchesOracle) {
  auto r = circle_map_word("sqrt5-2", "sqrt5-2", 0, 9);
  EXPECT_EQ(bits(r.word), (std::vector<int>{0, 0, 0, 0, 1, 0, 0, 0, 1, 0}));
}

TEST(CircleMap, DecimalAgreesWithExact) {
  const std::string digits = "0.23606797749978969640917366873127623544061835961152";
  auto exact = circle_map_word("sqrt5-2", "sqrt5-2", 0, 1999);
  auto dec = circle_map_word(digits, digits, 0, 1999);
  EXPECT_EQ(exact.word, dec.word);
  // with beta = alpha, n = -1 lands exactly on 1 - beta: exact input decides, decimal input refuses
  auto two_sided = circle_map_word("sqrt5-2", "sqrt5-2", -500, 1499);
  EXPECT_EQ(two_sided.word.origin, 500);
  EXPECT_EQ(two_sided.word.at(-1), 0);
  EXPECT_THROW(circle_map_word(digits, digits, -1, 3), ValidationError);
}

TEST(CircleMap, DecimalInsideGuardBandFails) {
  // frac(2 * 0.25000000000000000001) sits 2e-20 above 1/2 = 1 - beta
  EXPECT_THROW(circle_map_word("0.25000000000000000001", "0.5", 0, 4), ValidationError);
}

TEST(CircleMap, RationalIsPeriodic) {
  auto r = circle_map_word("1/2", "1/2", 0, 9);
  EXPECT_TRUE(r.periodic);
  // frac(n/2) is 0 or 1/2; neither lies in (1/2, 1]
  EXPECT_EQ(bits(r.word), std::vector<int>(10, 0));
  auto third = circle_map_word("1/3", "1/2", 0, 8);
  EXPECT_EQ(bits(third.word), (std::vector<int>{0, 0, 1, 0, 0, 1, 0, 0, 1}));
}

TEST(CircleMap, SturmianComplexity) {
  auto r = circle_map_word("sqrt5-2", "sqrt5-2", 0, 9999);
  for (std::size_t n = 1; n <= 12; ++n) {
    std::set<std::vector<int>> factors;
    for (std::size_t i = 0; i + n <= r.word.size(); ++i)
      factors.emplace(r.word.symbols.begin() + static_cast<std::ptrdiff_t>(i),
                      r.word.symbols.begin() + static_cast<std::ptrdiff_t>(i + n));
    EXPECT_EQ(factors.size(), n + 1) << n;
  }
}

TEST(Bernoulli, Reproducible) {
  Word a = bernoulli_word(0.5, 42, 10), b = bernoulli_word(0.5, 42, 10);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.str(), "1110101000");
  EXPECT_NE(bernoulli_word(0.5, 43, 64), bernoulli_word(0.5, 42, 64));
}

TEST(Bernoulli, FrequencyWithinThreeSigma) {
  const std::size_t n = 100000;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Word w = bernoulli_word(0.3, seed, n);
    double zeros = static_cast<double>(std::count(w.symbols.begin(), w.symbols.end(), 0));
    EXPECT_NEAR(zeros / n, 0.3, 3 * std::sqrt(0.3 * 0.7 / n));
  }
  EXPECT_THROW(bernoulli_word(1.0, 1, 10), ValidationError);
}

TEST(ContinuedFraction, QuadraticIrrationals) {
  CFExpansion g = continued_fraction(Quadratic::parse("phi-1"), 30);
  EXPECT_EQ(g.a, std::vector<std::int64_t>(30, 1));
  EXPECT_EQ(g.kaminaga_count(), 0u);
  CFExpansion s = continued_fraction(Quadratic::parse("sqrt5-2"), 25);
  EXPECT_EQ(s.a, std::vector<std::int64_t>(25, 4));
  EXPECT_EQ(s.kaminaga_count(), 25u);
  auto den = s.denominators();
  ASSERT_GE(den.size(), 7u);
  std::vector<std::int64_t> q(den.begin(), den.begin() + 7);
  EXPECT_EQ(q, (std::vector<std::int64_t>{1, 4, 17, 72, 305, 1292, 5473}));
}

TEST(ContinuedFraction, RationalTerminates) {
  CFExpansion c = continued_fraction("1/3", 10);
  EXPECT_TRUE(c.terminated);
  EXPECT_EQ(c.a, (std::vector<std::int64_t>{3}));
}

TEST(ContinuedFraction, Sqrt2) {
  CFExpansion c = continued_fraction("sqrt2", 12);
  EXPECT_EQ(c.a0, 1);
  EXPECT_EQ(c.a, std::vector<std::int64_t>(12, 2));
}

TEST(ContinuedFraction, TruncatedDecimalReportsTrustedPrefix) {
  CFExpansion ok = continued_fraction("0.2360679...", 5);
  EXPECT_EQ(ok.a, std::vector<std::int64_t>(5, 4));
  try {
    continued_fraction("0.2360679...", 20);
    FAIL() << "expected PrecisionExhausted";
  } catch (const PrecisionExhausted& e) {
    EXPECT_EQ(e.trusted_prefix(), 5u);
  }
}

TEST(CountOccurrences, Examples) {
  EXPECT_EQ(count_occurrences(make_word("aa"), make_word("aaaa")), 3u);
  EXPECT_EQ(count_occurrences(make_word("ab"), make_word("abaab")), 2u);
  EXPECT_EQ(count_occurrences(make_word("abaab"), make_word("ab")), 0u);
}

TEST(Gordon, PeriodicWord) {
  std::vector<int> syms;
  for (int i = 0; i < 200; ++i) syms.push_back(i % 2);
  Word w(syms, {"a", "b"}, 100);
  std::vector<std::int64_t> ps{2, 3};
  auto r = gordon_scan(w, ps);
  EXPECT_DOUBLE_EQ(r[0].density, 1.0);
  EXPECT_DOUBLE_EQ(r[1].density, 0.0);
}

TEST(Gordon, CircleMapDensitiesMatchOracle) {
  auto c = circle_map_word("sqrt5-2", "sqrt5-2", 0, 9999);
  std::vector<std::int64_t> ps{1, 4, 17, 72, 305, 1292};
  auto r = gordon_scan(c.word, ps, 2);
  std::vector<std::size_t> tested{9998, 9989, 9950, 9785, 9086, 6125}, hits{2918, 4980, 5365, 5434, 5073, 3539};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_EQ(r[i].tested, tested[i]) << ps[i];
    EXPECT_EQ(r[i].hits, hits[i]) << ps[i];
  }
}

TEST(Gordon, ThreadCountDoesNotChangeResult) {
  auto c = circle_map_word("sqrt5-2", "sqrt5-2", 0, 4999);
  std::vector<std::int64_t> ps{4, 17, 72, 305};
  auto a = gordon_scan(c.word, ps, 1), b = gordon_scan(c.word, ps, 4);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(a[i].hit_origins, b[i].hit_origins);
}

TEST(Gordon, WindowTooShortThrows) {
  std::vector<std::int64_t> ps{50};
  EXPECT_THROW(gordon_scan(make_word("abaab"), ps), InsufficientWindow);
}

TEST(Suspend, PointMasses) {
  Word ones(std::vector<int>{0, 0, 0}, {"1"});
  std::vector<ExactLength> unit_len{ExactLength::parse(Basis::unit(), "1")};
  MeasureWindow w = suspend(ones, unit_len);
  EXPECT_EQ(w.content(), integer_comb(3).content());

  Word twelve(std::vector<int>{0, 1}, {"1", "2"});
  std::vector<ExactLength> lens{L("1"), L("phi")};
  MeasureWindow g = suspend(twelve, lens);
  EXPECT_EQ(g.content(), PieceContent::normalized({{L("0"), 1}, {L("1"), 2}}, {}));
  EXPECT_EQ(g.end(), L("1+phi"));

  Word zeros(std::vector<int>{0, 1, 0}, {"0", "3"});
  MeasureWindow z = suspend(zeros, lens);
  EXPECT_EQ(z.content(), PieceContent::normalized({{L("1"), 3}}, {}));
}

TEST(Suspend, DeltaProfilesGivePeriodicComb) {
  SuspensionParams sp;
  sp.profiles = {atom_piece(L("1"), 1, "a"), atom_piece(L("1"), 1, "b")};
  MeasureWindow w = suspend_with_profiles(fibonacci_word(10), sp);
  auto per = detect_eventual_period(w);
  ASSERT_TRUE(per);
  EXPECT_EQ(per->period, L("1"));
}

TEST(Suspend, StepProfiles) {
  SuspensionParams sp;
  sp.profiles = {step_piece(L("1"), L("0"), L("1"), 1), step_piece(L("1"), L("0"), L("1"), 2)};
  MeasureWindow w = suspend_with_profiles(make_word("abba"), sp);
  std::vector<Step> want{{L("0"), L("1"), 1}, {L("1"), L("3"), 2}, {L("3"), L("4"), 1}};
  EXPECT_EQ(w.content().steps(), want);
  // two Lebesgue multiples: built, but without the s.f.d.p guarantee
  EXPECT_FALSE(sp.sfdp_guaranteed());
  EXPECT_TRUE(fibonacci_kp_params(3).sfdp_guaranteed());
}

TEST(Suspend, LengthsFromSupports) {
  std::vector<PieceContent> cs{PieceContent::normalized({{L("0"), 3}}, {}),
                               PieceContent::normalized({}, {{L("0"), L("phi"), 1}})};
  SuspensionParams sp = SuspensionParams::from_supports(cs, Basis::golden());
  EXPECT_EQ(sp.lengths(), (std::vector<ExactLength>{L("1"), L("phi")}));
  std::vector<PieceContent> bad{PieceContent::normalized({{L("0"), 1}, {L("phi"), 1}}, {})};
  EXPECT_THROW(SuspensionParams::from_supports(bad, Basis::golden()), ValidationError);
}

TEST(Suspend, FibonacciKpParams) {
  SuspensionParams sp = fibonacci_kp_params(3);
  MeasureWindow w = suspend_with_profiles(fibonacci_word(8), sp);
  EXPECT_EQ(w.content().atoms().size(), 34u);
  EXPECT_EQ(w.end(), L("21+13*phi"));
}

TEST(WordFile, RoundTrip) {
  auto c = circle_map_word("sqrt5-2", "sqrt5-2", -10, 200);
  std::stringstream ss;
  write_word(ss, c.word, {{"alpha", "sqrt5-2"}});
  WordFile back = read_word(ss);
  EXPECT_EQ(back.word, c.word);
  EXPECT_EQ(back.header.at("alpha"), "sqrt5-2");
}

TEST(WordFile, RejectsGarbage) {
  std::stringstream ss("#word alphabet=a,b origin=0 length=3\na b c\n");
  EXPECT_THROW(read_word(ss), ValidationError);
}
