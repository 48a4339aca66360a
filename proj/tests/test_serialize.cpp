#include <gtest/gtest.h>

#include <random>

#include "qlc/errors.hpp"
#include "qlc/serialize.hpp"
#include "support.hpp"

using namespace qlc;
using namespace qlc::test;

TEST(Serialize, RationalForms) {
  EXPECT_EQ(rational_from_json(to_json(Rational(-3, 7))), Rational(-3, 7));
  EXPECT_EQ(rational_from_json(Json(5)), Rational(5));
  EXPECT_EQ(rational_from_json(Json("2/6")), Rational(1, 3));
  EXPECT_THROW(rational_from_json(Json{{"num", 1}}), ValidationError);
}

TEST(Serialize, BasisRoundTripKeepsIdentity) {
  EXPECT_EQ(basis_from_json(basis_to_json(Basis::golden())), Basis::golden());
  EXPECT_EQ(basis_from_json(basis_to_json(Basis::unit())), Basis::unit());
}

TEST(Serialize, LengthAcceptsExpressions) {
  EXPECT_EQ(length_from_json(Json("1+2*phi"), Basis::golden()), L("1+2*phi"));
  EXPECT_EQ(length_from_json(Json(3), Basis::golden()), L("3"));
}

TEST(Serialize, RandomPiecesAndWindowsRoundTripByteStable) {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 200; ++i) {
    Piece p = random_piece(rng);
    p.label = "x" + std::to_string(i);
    Json j = to_json(p);
    Piece back = piece_from_json(j);
    ASSERT_EQ(back, p);
    ASSERT_EQ(back.label, p.label);
    ASSERT_EQ(dump(to_json(back)), dump(j));
    std::string text = dump(j);
    ASSERT_EQ(dump(Json::parse(text)), text);

    MeasureWindow w = MeasureWindow::from_piece(L("2-phi"), p);
    MeasureWindow wb = window_from_json(Json::parse(dump(to_json(w))));
    ASSERT_EQ(wb.origin(), w.origin());
    ASSERT_EQ(wb.end(), w.end());
    ASSERT_EQ(wb.content(), w.content());
  }
}

TEST(Serialize, PieceSetAndDecomposition) {
  MeasureWindow w = fibonacci_comb(9, 3);
  Decomposition d = decompose(w, fib_comb_pieces(3), L("0"));
  PieceSet ps = piece_set_from_json(to_json(d.pieces));
  Decomposition back = decomposition_from_json(decomposition_to_json(d), ps, Basis::golden());
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.x0, d.x0);
  Json bad = decomposition_to_json(d);
  bad["labels"][0] = "zz";
  EXPECT_THROW(decomposition_from_json(bad, ps, Basis::golden()), ValidationError);
}

TEST(Serialize, DeloneSet) {
  ColoredDeloneSet d({L("0"), L("1"), L("1+phi")}, {0, 1, 0});
  ColoredDeloneSet back = delone_from_json(to_json(d));
  EXPECT_EQ(back.points, d.points);
  EXPECT_EQ(back.colors, d.colors);
}

TEST(Serialize, MissingFieldsAreValidationErrors) {
  EXPECT_THROW(window_from_json(Json::object()), ValidationError);
  Json j = to_json(atom_piece(L("1"), 1));
  j.erase("length");
  EXPECT_THROW(piece_from_json(j), ValidationError);
}

TEST(Serialize, ReportSkeleton) {
  Json r = report_skeleton("sfdp", fibonacci_comb(5), "holds on window");
  EXPECT_EQ(r["property"], "sfdp");
  EXPECT_EQ(r["window"].size(), 2u);
  EXPECT_EQ(r.begin().key(), "property");
}
