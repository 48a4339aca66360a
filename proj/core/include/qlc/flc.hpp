#pragma once

// Window-level decision procedures for the finite-local-complexity notions
// (f.l.p, f.d.p, s.f.d.p, f.e.p, u.d.p) and the recoding constructions that
// turn occurrence sets into decompositions. Every verdict here is a verdict
// about the finite window that was passed in, never about an infinite measure.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlc/measure.hpp"

namespace qlc {

class PieceSet {
 public:
  PieceSet() = default;
  // Labels must be unique; empty labels are replaced by "p<index>".
  explicit PieceSet(std::vector<Piece> pieces);

  std::size_t size() const { return pieces_.size(); }
  const Piece& operator[](std::size_t i) const { return pieces_[i]; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  const ExactLength& min_length() const { return min_len_; }
  const ExactLength& max_length() const { return max_len_; }

 private:
  std::vector<Piece> pieces_;
  ExactLength min_len_;
  ExactLength max_len_;
};

// Grid x_0 < x_1 < ... with x_{k+1} = x_k + len(piece labels[k]).
struct Decomposition {
  ExactLength x0;
  std::vector<std::size_t> labels;
  PieceSet pieces;

  std::vector<ExactLength> grid() const;
  ExactLength end() const;
  std::vector<std::string> label_names() const;
  Piece assembled() const;
};

// Builds a decomposition from explicit labels after checking the round-trip
// law against the window.
Decomposition make_decomposition(const MeasureWindow& w, PieceSet pieces, const ExactLength& x0,
                                 std::vector<std::size_t> labels);

Decomposition decompose(const MeasureWindow& w, const PieceSet& pieces, const ExactLength& x0);

struct SfdpCounterexample {
  ExactLength y;
  ExactLength z;
  ExactLength common_prefix_length;
  std::string next_label_y;
  std::string next_label_z;
  ExactLength next_length_y;
  ExactLength next_length_z;
};

struct SfdpResult {
  bool ok = true;
  std::size_t grid_points_checked = 0;
  std::optional<SfdpCounterexample> counterexample;
};

SfdpResult check_sfdp(const MeasureWindow& w, const Decomposition& dec, const ExactLength& ell);

struct UdpConflict {
  ExactLength x1;
  std::string label1;
  ExactLength x2;
  std::string label2;
};

struct UdpResult {
  bool unique = true;
  std::size_t positions_checked = 0;
  std::optional<UdpConflict> conflict;
};

// Explores every decomposition of the window tail from x0 (default: the
// window origin) into pieces of P.
UdpResult check_udp(const MeasureWindow& w, const PieceSet& pieces, const ExactLength& radius,
                    std::optional<ExactLength> x0 = std::nullopt);

struct FlpReport {
  ExactLength rho;
  std::vector<std::pair<ExactLength, std::size_t>> patch_counts;  // (L, distinct patches)
  std::size_t samples = 0;
  std::size_t samples_without_breakpoint = 0;  // anchored at x itself
};

FlpReport check_flp(const MeasureWindow& w, const ExactLength& rho, std::span<const ExactLength> patch_radii);

struct FepReport {
  std::size_t extension_set_size = 0;
  std::size_t max_extensions_per_prefix = 0;
  std::size_t prefixes_checked = 0;
  std::size_t distinct_prefixes = 0;
  std::optional<ExactLength> worst_prefix_at;
  std::vector<ExactLength> prefix_lengths;
};

FepReport check_fep(const MeasureWindow& w, const ExactLength& rho, const ExactLength& ext_len);

struct Recoding {
  Decomposition decomposition;
  std::vector<ExactLength> occurrence_points;
  ExactLength max_gap;
  ExactLength pilot_length;
};

// Grid at the union of occurrence points of the pieces in `pilots`. Throws
// AccumulatingOccurrences for continuum/near-accumulating occurrence sets and
// NotRelativelyDense when gaps exceed `max_gap` (default: a quarter window).
Recoding recode_by_occurrences(const MeasureWindow& w, const PieceSet& pilots,
                               std::optional<ExactLength> max_gap = std::nullopt);

struct DeloneDecomposition {
  MeasureWindow window;
  ExactLength support_extent;  // s = sup supp(nu)
  Decomposition decomposition;
};

DeloneDecomposition build_delone_decomposition(const ColoredDeloneSet& d, const Piece& profile);

struct EventualPeriod {
  ExactLength x0;
  ExactLength period;
};

// Repetitions shorter than this many periods are not reported; the Fibonacci
// word has critical exponent 2 + phi.
inline constexpr std::int64_t kMinTailPeriods = 4;

// Smallest breakpoint-difference period p and the earliest anchor x0 in
// `search` (origin or a breakpoint) whose tail [x0, end) spans at least
// kMinTailPeriods periods and is p-periodic. The default search range is the
// first half of the window.
std::optional<EventualPeriod> detect_eventual_period(
    const MeasureWindow& w, std::optional<std::pair<ExactLength, ExactLength>> search = std::nullopt);

struct DeloneMeasureReport {
  bool discrete = false;
  bool covered = false;
  std::size_t occurrence_count = 0;
  std::optional<ExactLength> uncovered_at;
  bool verdict() const { return discrete && covered; }
};

DeloneMeasureReport check_delone_measure_flc(const MeasureWindow& w, std::span<const Piece> profiles);

MeasureWindow sub_window(const MeasureWindow& w, const ExactLength& lo, const ExactLength& hi);

}  // namespace qlc
