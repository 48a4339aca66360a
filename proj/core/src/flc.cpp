#include "qlc/flc.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "qlc/errors.hpp"

namespace qlc {
namespace {

bool piece_matches(const MeasureWindow& w, const ExactLength& pos, const Piece& p) {
  if (w.end() < pos + p.len) return false;
  return restrict(w, pos, p.len) == p;
}

// The tail [pos, end) may be left over when it is empty, shorter than every
// piece, or a proper prefix of some piece (the window cut a piece short).
bool tail_acceptable(const MeasureWindow& w, const PieceSet& pieces, const ExactLength& pos) {
  ExactLength rest = w.end() - pos;
  if (rest.is_zero() || rest < pieces.min_length()) return true;
  const Piece tail = restrict(w, pos, rest);
  for (const auto& p : pieces.pieces()) {
    if (!(rest < p.len)) continue;
    if (tail.content == p.content.restricted(ExactLength(rest.basis()), rest)) return true;
  }
  return false;
}

struct LabelsHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = h * 1000003u ^ (x + 0x9e3779b9u);
    return h;
  }
};

struct CollarKey {
  std::vector<std::size_t> left;
  PieceContent right;
  friend bool operator==(const CollarKey&, const CollarKey&) = default;
};

struct CollarKeyHash {
  std::size_t operator()(const CollarKey& k) const { return LabelsHash{}(k.left) ^ (k.right.hash() * 31u); }
};

struct PrefixKey {
  PieceContent content;
  ExactLength cut;
  friend bool operator==(const PrefixKey&, const PrefixKey&) = default;
};

struct PrefixHash {
  std::size_t operator()(const PrefixKey& k) const { return k.content.hash() ^ (k.cut.hash() << 1); }
};

std::string label_of(const PieceSet& ps, std::size_t i) { return ps[i].label; }

}  // namespace

// ---------------------------------------------------------------------------

PieceSet::PieceSet(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw ValidationError("piece set must be nonempty");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].label.empty()) pieces_[i].label = "p" + std::to_string(i);
    for (std::size_t j = 0; j < i; ++j)
      if (pieces_[j].label == pieces_[i].label) throw ValidationError("duplicate piece label '" + pieces_[i].label + "'");
    if (pieces_[i].len.basis() != pieces_[0].len.basis()) throw BasisMismatch();
  }
  min_len_ = pieces_[0].len;
  max_len_ = pieces_[0].len;
  for (const auto& p : pieces_) {
    if (p.len < min_len_) min_len_ = p.len;
    if (max_len_ < p.len) max_len_ = p.len;
  }
}

std::optional<std::size_t> PieceSet::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].label == label) return i;
  return std::nullopt;
}

std::vector<ExactLength> Decomposition::grid() const {
  std::vector<ExactLength> g;
  g.reserve(labels.size() + 1);
  g.push_back(x0);
  for (auto l : labels) g.push_back(g.back() + pieces[l].len);
  return g;
}

ExactLength Decomposition::end() const {
  ExactLength e = x0;
  for (auto l : labels) e += pieces[l].len;
  return e;
}

std::vector<std::string> Decomposition::label_names() const {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(pieces[l].label);
  return out;
}

Piece Decomposition::assembled() const {
  std::vector<Piece> seq;
  seq.reserve(labels.size());
  for (auto l : labels) seq.push_back(pieces[l]);
  return concat(seq);
}

Decomposition make_decomposition(const MeasureWindow& w, PieceSet pieces, const ExactLength& x0,
                                 std::vector<std::size_t> labels) {
  if (labels.empty()) throw ValidationError("decomposition needs at least one piece");
  for (auto l : labels)
    if (l >= pieces.size()) throw ValidationError("label index out of range");
  Decomposition dec{x0, std::move(labels), std::move(pieces)};
  Piece whole = dec.assembled();
  if (!(restrict(w, x0, whole.len) == whole)) throw ValidationError("labels do not reassemble the window");
  return dec;
}

namespace {

std::optional<Decomposition> search_decomposition(const MeasureWindow& w, const PieceSet& pieces,
                                                  const ExactLength& x0, bool exact_cover) {
  struct Frame {
    ExactLength pos;
    std::size_t next = 0;
  };
  std::unordered_set<ExactLength> dead;
  std::vector<Frame> stack{{x0, 0}};
  std::vector<std::size_t> labels;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < pieces.size()) {
      std::size_t i = f.next++;
      ExactLength np = f.pos + pieces[i].len;
      if (dead.contains(np)) continue;
      if (piece_matches(w, f.pos, pieces[i])) {
        labels.push_back(i);
        stack.push_back({std::move(np), 0});
      }
      continue;
    }
    bool done = exact_cover ? f.pos == w.end() : tail_acceptable(w, pieces, f.pos);
    if (!labels.empty() && done) return Decomposition{x0, std::move(labels), pieces};
    dead.insert(f.pos);
    stack.pop_back();
    if (!labels.empty()) labels.pop_back();
  }
  return std::nullopt;
}

}  // namespace

// Exact tilings of [x0, end) are preferred; only when none exists may the
// window cut the last piece short.
Decomposition decompose(const MeasureWindow& w, const PieceSet& pieces, const ExactLength& x0) {
  if (x0 < w.origin() || !(x0 < w.end())) throw ValidationError("x0 outside the window");
  if (auto d = search_decomposition(w, pieces, x0, true)) return std::move(*d);
  if (auto d = search_decomposition(w, pieces, x0, false)) return std::move(*d);
  throw NoDecomposition("no decomposition of the window from " + x0.str() + " into the given pieces");
}

SfdpResult check_sfdp(const MeasureWindow& w, const Decomposition& dec, const ExactLength& ell) {
  if (ell.sign() <= 0) throw ValidationError("collar length must be positive");
  const auto grid = dec.grid();
  const ExactLength& last = grid.back();
  struct Seen {
    ExactLength at;
    std::size_t next;
  };
  std::unordered_map<CollarKey, Seen, CollarKeyHash> seen;
  SfdpResult res;
  std::size_t j = 0;  // start of the shortest label suffix of length >= ell
  bool any_left = false;
  for (std::size_t k = 0; k < dec.labels.size(); ++k) {
    const ExactLength& x = grid[k];
    if (x - grid[0] < ell) continue;
    if (!any_left) any_left = true;
    while (!(x - grid[j + 1] < ell)) ++j;
    if (last < x + ell) break;
    CollarKey key{std::vector<std::size_t>(dec.labels.begin() + static_cast<std::ptrdiff_t>(j),
                                           dec.labels.begin() + static_cast<std::ptrdiff_t>(k)),
                  restrict(w, x, ell).content};
    ++res.grid_points_checked;
    auto [it, inserted] = seen.try_emplace(std::move(key), Seen{x, dec.labels[k]});
    if (inserted) continue;
    const Piece& a = dec.pieces[it->second.next];
    const Piece& b = dec.pieces[dec.labels[k]];
    if (!(a.len == b.len)) {
      res.ok = false;
      ExactLength prefix(ell.basis());
      for (std::size_t i = j; i < k; ++i) prefix += dec.pieces[dec.labels[i]].len;
      res.counterexample = SfdpCounterexample{it->second.at, x, prefix, a.label, b.label, a.len, b.len};
      return res;
    }
  }
  if (res.grid_points_checked < 2)
    throw WindowTooShort("fewer than two grid points admit a collar of length " + ell.str());
  return res;
}

UdpResult check_udp(const MeasureWindow& w, const PieceSet& pieces, const ExactLength& radius,
                    std::optional<ExactLength> x0) {
  if (radius.sign() <= 0) throw ValidationError("radius must be positive");
  const ExactLength start = x0 ? *x0 : w.origin();
  struct Edge {
    std::size_t label;
    ExactLength to;
  };
  std::unordered_map<ExactLength, std::vector<Edge>> out;
  std::vector<ExactLength> order{start};
  out[start];
  for (std::size_t head = 0; head < order.size(); ++head) {
    ExactLength pos = order[head];
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (!piece_matches(w, pos, pieces[i])) continue;
      ExactLength np = pos + pieces[i].len;
      edges.push_back({i, np});
      if (!out.contains(np)) {
        out[np];
        order.push_back(np);
      }
    }
    out[pos] = std::move(edges);
  }
  // Nodes that can still finish a decomposition.
  std::unordered_map<ExactLength, std::vector<ExactLength>> in;
  for (const auto& [u, edges] : out)
    for (const auto& e : edges) in[e.to].push_back(u);
  std::unordered_set<ExactLength> useful;
  std::vector<ExactLength> work;
  for (const auto& pos : order)
    if (tail_acceptable(w, pieces, pos) && pos != start) {
      useful.insert(pos);
      work.push_back(pos);
    }
  while (!work.empty()) {
    ExactLength v = work.back();
    work.pop_back();
    for (const auto& u : in[v])
      if (useful.insert(u).second) work.push_back(u);
  }
  if (!useful.contains(start)) throw NoDecomposition("no decomposition of the window from " + start.str());

  std::vector<ExactLength> nodes(useful.begin(), useful.end());
  std::sort(nodes.begin(), nodes.end());
  std::unordered_map<PieceContent, std::pair<ExactLength, std::size_t>> seen;
  UdpResult res;
  const ExactLength diameter = radius * Rational(2);
  for (const auto& u : nodes) {
    if (u - radius < w.origin() || w.end() < u + radius) continue;
    PieceContent key = restrict(w, u - radius, diameter).content;
    for (const auto& e : out[u]) {
      if (!useful.contains(e.to)) continue;
      ++res.positions_checked;
      auto [it, inserted] = seen.try_emplace(key, u, e.label);
      if (!inserted && it->second.second != e.label) {
        res.unique = false;
        res.conflict = UdpConflict{it->second.first, label_of(pieces, it->second.second), u, label_of(pieces, e.label)};
        return res;
      }
    }
  }
  return res;
}

FlpReport check_flp(const MeasureWindow& w, const ExactLength& rho, std::span<const ExactLength> patch_radii) {
  if (rho.sign() <= 0) throw ValidationError("rho must be positive");
  for (const auto& l : patch_radii)
    if (l < rho * Rational(2)) throw ValidationError("every L must be at least 2*rho");
  const auto bps = w.content().breakpoints();
  std::vector<std::unordered_set<PieceContent>> seen(patch_radii.size());
  FlpReport rep;
  rep.rho = rho;
  for (ExactLength x = w.origin(); x < w.end(); x += rho) {
    ++rep.samples;
    auto it = std::lower_bound(bps.begin(), bps.end(), x);
    std::optional<ExactLength> anchor;
    if (it != bps.begin()) {
      ExactLength d = x - *std::prev(it);
      if (!(rho < d)) anchor = *std::prev(it);
    }
    if (it != bps.end()) {
      ExactLength d = *it - x;
      if (!(rho < d) && (!anchor || d < x - *anchor)) anchor = *it;
    }
    if (!anchor) {
      anchor = x;
      ++rep.samples_without_breakpoint;
    }
    for (std::size_t i = 0; i < patch_radii.size(); ++i) {
      const ExactLength& l = patch_radii[i];
      if (*anchor - l < w.origin() || w.end() < *anchor + l) continue;
      seen[i].insert(restrict(w, *anchor - l, l * Rational(2)).content);
    }
  }
  for (std::size_t i = 0; i < patch_radii.size(); ++i) rep.patch_counts.emplace_back(patch_radii[i], seen[i].size());
  return rep;
}

FepReport check_fep(const MeasureWindow& w, const ExactLength& rho, const ExactLength& ext_len) {
  if (rho.sign() <= 0 || ext_len.sign() <= 0) throw ValidationError("rho and L must be positive");
  const auto bps = w.content().breakpoints();
  FepReport rep;
  std::unordered_set<PieceContent> extensions;
  for (Rational mult : {Rational(1), Rational(2), Rational(4), Rational(8)}) {
    ExactLength r = rho * mult;
    if (w.length() < (r + ext_len) * Rational(2)) break;
    rep.prefix_lengths.push_back(r);
    std::unordered_map<PrefixKey, std::pair<ExactLength, std::unordered_set<PieceContent>>, PrefixHash> per_prefix;
    for (const auto& x : bps) {
      if (x < w.origin() || w.end() < x + r + ext_len) continue;
      Piece prefix = restrict(w, x, r);
      // r' = last breakpoint of the prefix in [r - rho, r), else r
      ExactLength cut = r;
      const ExactLength lo = r - rho;
      for (const auto& t : prefix.content.breakpoints())
        if (!(t < lo) && t < r) cut = t;
      Piece ext = restrict(w, x + cut, ext_len);
      auto& slot = per_prefix.try_emplace(PrefixKey{prefix.content, cut}, x, std::unordered_set<PieceContent>{}).first->second;
      slot.second.insert(ext.content);
      extensions.insert(ext.content);
      ++rep.prefixes_checked;
    }
    rep.distinct_prefixes += per_prefix.size();
    std::vector<std::pair<ExactLength, std::size_t>> counts;
    for (const auto& [k, v] : per_prefix) counts.emplace_back(v.first, v.second.size());
    std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [at, n] : counts) {
      if (n > rep.max_extensions_per_prefix) {
        rep.max_extensions_per_prefix = n;
        rep.worst_prefix_at = at;
      }
    }
  }
  rep.extension_set_size = extensions.size();
  return rep;
}

Recoding recode_by_occurrences(const MeasureWindow& w, const PieceSet& pilots, std::optional<ExactLength> max_gap) {
  std::vector<ExactLength> pts;
  for (const auto& p : pilots.pieces()) {
    Occurrences occ = occurrences(w, p);
    if (!occ.ranges.empty())
      throw AccumulatingOccurrences("occurrences of '" + p.label + "' form a continuum (Lebesgue multiple)");
    pts.insert(pts.end(), occ.points.begin(), occ.points.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) throw NotRelativelyDense("fewer than two occurrences on the window");
  const ExactLength min_allowed = pilots.min_length() * Rational(1, 4);
  const ExactLength gap_bound = max_gap ? *max_gap : w.length() * Rational(1, 4);
  if (gap_bound < pts.front() - w.origin())
    throw NotRelativelyDense("first occurrence is further than " + gap_bound.str() + " from the origin");
  ExactLength widest(w.origin().basis());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    ExactLength g = pts[i] - pts[i - 1];
    if (g < min_allowed) throw AccumulatingOccurrences("occurrence gap " + g.str() + " below l_P/4");
    if (gap_bound < g) throw NotRelativelyDense("occurrence gap " + g.str() + " exceeds " + gap_bound.str());
    if (widest < g) widest = g;
  }
  std::vector<Piece> distinct;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Piece p = restrict(w, pts[i], pts[i + 1] - pts[i]);
    auto it = std::find(distinct.begin(), distinct.end(), p);
    if (it == distinct.end()) {
      p.label = "r" + std::to_string(distinct.size());
      distinct.push_back(std::move(p));
      labels.push_back(distinct.size() - 1);
    } else {
      labels.push_back(static_cast<std::size_t>(it - distinct.begin()));
    }
  }
  Recoding rec{Decomposition{pts.front(), std::move(labels), PieceSet(std::move(distinct))}, pts, widest,
               pilots.max_length()};
  return rec;
}

DeloneDecomposition build_delone_decomposition(const ColoredDeloneSet& d, const Piece& profile) {
  if (d.size() < 2) throw ValidationError("need at least two Delone points");
  auto lo = profile.content.support_min();
  auto hi = profile.content.support_max();
  if (!lo || !lo->is_zero()) throw ValidationError("profile must have min supp = 0");
  const ExactLength s = *hi;
  std::vector<Piece> prof{profile};
  MeasureWindow w = convolve(ColoredDeloneSet::monochrome(d.points), prof);
  // first grid point whose left collar [x - s, x] lies inside the set's hull
  std::size_t k0 = 0;
  while (k0 < d.size() && d.points[k0] - d.points.front() < s) ++k0;
  if (k0 + 1 >= d.size()) throw ValidationError("point set too short for the profile support");
  std::vector<Piece> distinct;
  std::vector<std::size_t> labels;
  for (std::size_t k = k0; k + 1 < d.size(); ++k) {
    Piece p = restrict(w, d.points[k], d.points[k + 1] - d.points[k]);
    auto it = std::find(distinct.begin(), distinct.end(), p);
    if (it == distinct.end()) {
      p.label = "g" + std::to_string(distinct.size());
      distinct.push_back(std::move(p));
      labels.push_back(distinct.size() - 1);
    } else {
      labels.push_back(static_cast<std::size_t>(it - distinct.begin()));
    }
  }
  Decomposition dec{d.points[k0], std::move(labels), PieceSet(std::move(distinct))};
  return DeloneDecomposition{std::move(w), s, std::move(dec)};
}

std::optional<EventualPeriod> detect_eventual_period(const MeasureWindow& w,
                                                     std::optional<std::pair<ExactLength, ExactLength>> search) {
  const auto bps = w.content().breakpoints();
  if (bps.size() < 2) return std::nullopt;
  const ExactLength& last = bps.back();
  const ExactLength total = w.length();
  // A period of the tail maps the last breakpoint onto an earlier one.
  std::vector<ExactLength> periods;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    ExactLength p = last - bps[i];
    if (!(total < p * Rational(kMinTailPeriods))) periods.push_back(std::move(p));
  }
  std::sort(periods.begin(), periods.end());
  periods.erase(std::unique(periods.begin(), periods.end()), periods.end());

  std::vector<ExactLength> anchors{w.origin()};
  for (const auto& t : bps)
    if (w.origin() < t) anchors.push_back(t);
  // Default: the periodic tail must cover at least half the window, which keeps
  // local repetitions near the end (cubes in Sturmian words) from qualifying.
  const ExactLength lo = search ? search->first : w.origin();
  const ExactLength hi = search ? search->second : w.origin() + total * Rational(1, 2);
  std::erase_if(anchors, [&](const ExactLength& x) { return x < lo || hi < x; });
  for (const auto& p : periods) {
    const ExactLength latest = w.end() - p * Rational(kMinTailPeriods);
    auto stop = std::upper_bound(anchors.begin(), anchors.end(), latest);
    std::size_t n = static_cast<std::size_t>(stop - anchors.begin());
    if (n == 0) continue;
    auto periodic_from = [&](const ExactLength& x0) {
      ExactLength span = w.end() - x0 - p;
      return restrict(w, x0, span) == restrict(w, x0 + p, span);
    };
    if (!periodic_from(anchors[n - 1])) continue;
    std::size_t lo = 0, hi = n - 1;  // anchors[hi] valid
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (periodic_from(anchors[mid])) hi = mid;
      else lo = mid + 1;
    }
    return EventualPeriod{anchors[hi], p};
  }
  return std::nullopt;
}

DeloneMeasureReport check_delone_measure_flc(const MeasureWindow& w, std::span<const Piece> profiles) {
  DeloneMeasureReport rep;
  rep.discrete = true;
  struct Placed {
    ExactLength at;
    std::size_t profile;
  };
  std::vector<Placed> placed;
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    Occurrences occ = occurrences(w, profiles[j]);
    if (!occ.ranges.empty()) rep.discrete = false;
    for (auto& x : occ.points) placed.push_back({x, j});
  }
  std::vector<ExactLength> pts;
  for (const auto& p : placed) pts.push_back(p.at);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  rep.occurrence_count = pts.size();
  if (pts.empty()) rep.discrete = false;

  std::unordered_set<ExactLength> covered_atoms;
  std::vector<std::pair<ExactLength, ExactLength>> covered_steps;
  for (const auto& pl : placed) {
    const Piece& prof = profiles[pl.profile];
    for (const auto& a : prof.content.atoms()) covered_atoms.insert(a.at + pl.at);
    for (const auto& s : prof.content.steps()) covered_steps.emplace_back(s.start + pl.at, s.end + pl.at);
  }
  std::sort(covered_steps.begin(), covered_steps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<ExactLength, ExactLength>> merged;
  for (auto& iv : covered_steps) {
    if (!merged.empty() && !(merged.back().second < iv.first)) {
      if (merged.back().second < iv.second) merged.back().second = iv.second;
    } else {
      merged.push_back(iv);
    }
  }
  rep.covered = true;
  for (const auto& a : w.content().atoms()) {
    if (!covered_atoms.contains(a.at)) {
      rep.covered = false;
      rep.uncovered_at = a.at;
      return rep;
    }
  }
  for (const auto& s : w.content().steps()) {
    auto it = std::upper_bound(merged.begin(), merged.end(), s.start,
                               [](const ExactLength& x, const auto& iv) { return x < iv.first; });
    bool ok = it != merged.begin() && !(std::prev(it)->second < s.end);
    if (!ok) {
      rep.covered = false;
      rep.uncovered_at = s.start;
      return rep;
    }
  }
  return rep;
}

MeasureWindow sub_window(const MeasureWindow& w, const ExactLength& lo, const ExactLength& hi) {
  if (lo < w.origin() || w.end() < hi) throw ValidationError("sub-window outside the window");
  return MeasureWindow(lo, hi, w.content().restricted(lo, hi));
}

}  // namespace qlc
