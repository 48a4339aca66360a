#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlc/exact.hpp"
#include "qlc/rational.hpp"

namespace qlc {

struct Atom {
  ExactLength at;
  Rational weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Constant density `value` on [start, end).
struct Step {
  ExactLength start;
  ExactLength end;
  Rational value;
  friend bool operator==(const Step&, const Step&) = default;
};

// Atoms plus piecewise-constant density, held in canonical form: atoms strictly
// sorted with nonzero weights, steps sorted, disjoint, nonzero, and adjacent
// equal-valued steps merged. Canonical form makes == equality of measures.
class PieceContent {
 public:
  PieceContent() = default;

  // Sums everything it is given: co-located atoms merge, overlapping steps add.
  static PieceContent normalized(std::vector<Atom> atoms, std::vector<Step> steps);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Step>& steps() const { return steps_; }
  bool empty() const { return atoms_.empty() && steps_.empty(); }

  PieceContent translated(const ExactLength& shift) const;
  PieceContent scaled(const Rational& k) const;
  // Part of the measure on [lo, hi), positions unchanged.
  PieceContent restricted(const ExactLength& lo, const ExactLength& hi) const;

  // Atom positions and density change points, sorted and unique.
  std::vector<ExactLength> breakpoints() const;
  Rational density_at(const ExactLength& x) const;
  std::optional<ExactLength> support_min() const;
  std::optional<ExactLength> support_max() const;

  friend PieceContent operator+(const PieceContent& a, const PieceContent& b);
  friend bool operator==(const PieceContent&, const PieceContent&) = default;

  std::size_t hash() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Step> steps_;
};

// A measure on [0, len) with len > 0.
struct Piece {
  ExactLength len;
  PieceContent content;
  std::string label;

  Piece() = default;
  Piece(ExactLength length, PieceContent c, std::string name = {});

  // Measure equality; labels do not participate.
  friend bool operator==(const Piece& a, const Piece& b) { return a.len == b.len && a.content == b.content; }

  bool is_lebesgue_multiple() const;
  std::optional<Rational> lebesgue_density() const;
};

Piece zero_piece(const ExactLength& len, std::string label = {});
Piece atom_piece(const ExactLength& len, const Rational& weight, std::string label = {});
Piece step_piece(const ExactLength& len, const ExactLength& start, const ExactLength& end, const Rational& value,
                 std::string label = {});

// A finite restriction of a measure to [origin, end). Positions are absolute.
class MeasureWindow {
 public:
  MeasureWindow() = default;
  MeasureWindow(ExactLength origin, ExactLength end, PieceContent content);
  static MeasureWindow from_piece(const ExactLength& origin, const Piece& p);

  const ExactLength& origin() const { return origin_; }
  const ExactLength& end() const { return end_; }
  ExactLength length() const { return end_ - origin_; }
  const PieceContent& content() const { return content_; }
  const Basis* basis() const { return origin_.basis() ? origin_.basis() : end_.basis(); }

  Piece as_piece() const;

 private:
  ExactLength origin_;
  ExactLength end_;
  PieceContent content_;
};

struct ColoredDeloneSet {
  std::vector<ExactLength> points;
  std::vector<int> colors;

  ColoredDeloneSet() = default;
  ColoredDeloneSet(std::vector<ExactLength> pts, std::vector<int> cols);
  static ColoredDeloneSet monochrome(std::vector<ExactLength> pts);
  std::size_t size() const { return points.size(); }
};

struct OccurrenceRange {
  ExactLength lo;
  ExactLength hi;
  bool lo_open = false;  // hi is always included
};

struct Occurrences {
  std::vector<ExactLength> points;
  std::vector<OccurrenceRange> ranges;
  bool empty() const { return points.empty() && ranges.empty(); }
};

struct PointSetReport {
  bool is_delone = false;
  std::size_t patch_count = 0;
  std::size_t centers_examined = 0;
};

Piece concat(std::span<const Piece> pieces);
Piece restrict(const MeasureWindow& w, const ExactLength& x, const ExactLength& len);
Occurrences occurrences(const MeasureWindow& w, const Piece& p);
PointSetReport analyze_point_set(const ColoredDeloneSet& d, const ExactLength& r, const ExactLength& big_r,
                                 const ExactLength& patch_radius);
// profiles[c] is placed at every point of color c.
MeasureWindow convolve(const ColoredDeloneSet& d, std::span<const Piece> profiles);
bool check_translation_bound(const MeasureWindow& w, long double bound);

}  // namespace qlc

template <>
struct std::hash<qlc::PieceContent> {
  std::size_t operator()(const qlc::PieceContent& c) const noexcept { return c.hash(); }
};
