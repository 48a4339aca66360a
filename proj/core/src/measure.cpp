#include "qlc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "qlc/errors.hpp"

namespace qlc {
namespace {

void append_merging(std::vector<Step>& out, const Step& s) {
  if (!out.empty() && out.back().end == s.start && out.back().value == s.value) {
    out.back().end = s.end;
  } else {
    out.push_back(s);
  }
}

bool less_pos(const ExactLength& a, const ExactLength& b) { return a < b; }

}  // namespace

// ---------------------------------------------------------------------------
// PieceContent

PieceContent PieceContent::normalized(std::vector<Atom> atoms, std::vector<Step> steps) {
  PieceContent out;
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  for (auto& a : atoms) {
    if (!out.atoms_.empty() && out.atoms_.back().at == a.at) {
      out.atoms_.back().weight += a.weight;
    } else {
      out.atoms_.push_back(std::move(a));
    }
  }
  std::erase_if(out.atoms_, [](const Atom& a) { return a.weight.is_zero(); });

  struct Event {
    ExactLength at;
    Rational delta;
  };
  std::vector<Event> events;
  events.reserve(2 * steps.size());
  for (auto& s : steps) {
    int order = (s.end - s.start).sign();
    if (order < 0) throw ValidationError("step with end before start");
    if (order == 0 || s.value.is_zero()) continue;
    events.push_back({s.start, s.value});
    events.push_back({s.end, -s.value});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });
  Rational running;
  for (std::size_t i = 0; i < events.size();) {
    std::size_t j = i;
    while (j < events.size() && events[j].at == events[i].at) running += events[j++].delta;
    if (j < events.size() && !running.is_zero()) append_merging(out.steps_, Step{events[i].at, events[j].at, running});
    i = j;
  }
  return out;
}

PieceContent PieceContent::translated(const ExactLength& shift) const {
  PieceContent out = *this;
  if (shift.is_zero()) return out;
  for (auto& a : out.atoms_) a.at += shift;
  for (auto& s : out.steps_) {
    s.start += shift;
    s.end += shift;
  }
  return out;
}

PieceContent PieceContent::scaled(const Rational& k) const {
  if (k.is_zero()) return {};
  PieceContent out = *this;
  for (auto& a : out.atoms_) a.weight *= k;
  for (auto& s : out.steps_) s.value *= k;
  return out;
}

PieceContent PieceContent::restricted(const ExactLength& lo, const ExactLength& hi) const {
  PieceContent out;
  auto a0 = std::lower_bound(atoms_.begin(), atoms_.end(), lo, [](const Atom& a, const ExactLength& x) { return a.at < x; });
  for (auto it = a0; it != atoms_.end() && it->at < hi; ++it) out.atoms_.push_back(*it);
  auto s0 = std::upper_bound(steps_.begin(), steps_.end(), lo, [](const ExactLength& x, const Step& s) { return x < s.end; });
  for (auto it = s0; it != steps_.end() && it->start < hi; ++it) {
    Step s = *it;
    if (s.start < lo) s.start = lo;
    if (hi < s.end) s.end = hi;
    out.steps_.push_back(std::move(s));
  }
  return out;
}

std::vector<ExactLength> PieceContent::breakpoints() const {
  std::vector<ExactLength> bounds;
  bounds.reserve(2 * steps_.size());
  for (const auto& s : steps_) {
    if (bounds.empty() || !(bounds.back() == s.start)) bounds.push_back(s.start);
    bounds.push_back(s.end);
  }
  std::vector<ExactLength> out;
  out.reserve(bounds.size() + atoms_.size());
  std::size_t i = 0, j = 0;
  while (i < bounds.size() || j < atoms_.size()) {
    const ExactLength* next;
    if (j == atoms_.size() || (i < bounds.size() && bounds[i] < atoms_[j].at)) {
      next = &bounds[i++];
    } else {
      next = &atoms_[j++].at;
    }
    if (out.empty() || !(out.back() == *next)) out.push_back(*next);
  }
  return out;
}

Rational PieceContent::density_at(const ExactLength& x) const {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), x, [](const ExactLength& v, const Step& s) { return v < s.end; });
  if (it != steps_.end() && !(x < it->start)) return it->value;
  return Rational(0);
}

std::optional<ExactLength> PieceContent::support_min() const {
  std::optional<ExactLength> m;
  if (!atoms_.empty()) m = atoms_.front().at;
  if (!steps_.empty() && (!m || steps_.front().start < *m)) m = steps_.front().start;
  return m;
}

std::optional<ExactLength> PieceContent::support_max() const {
  std::optional<ExactLength> m;
  if (!atoms_.empty()) m = atoms_.back().at;
  if (!steps_.empty() && (!m || *m < steps_.back().end)) m = steps_.back().end;
  return m;
}

PieceContent operator+(const PieceContent& a, const PieceContent& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  std::vector<Atom> atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  std::vector<Step> steps = a.steps_;
  steps.insert(steps.end(), b.steps_.begin(), b.steps_.end());
  return PieceContent::normalized(std::move(atoms), std::move(steps));
}

std::size_t PieceContent::hash() const {
  std::size_t h = atoms_.size() * 31 + steps_.size();
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& a : atoms_) {
    mix(a.at.hash());
    mix(std::hash<Rational>{}(a.weight));
  }
  for (const auto& s : steps_) {
    mix(s.start.hash());
    mix(s.end.hash());
    mix(std::hash<Rational>{}(s.value));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Piece

Piece::Piece(ExactLength length, PieceContent c, std::string name)
    : len(std::move(length)), content(std::move(c)), label(std::move(name)) {
  if (len.sign() <= 0) throw ValidationError("piece length must be positive");
  ExactLength zero(len.basis());
  if (auto lo = content.support_min(); lo && *lo < zero) throw ValidationError("piece content starts before 0");
  if (!content.atoms().empty() && !(content.atoms().back().at < len))
    throw ValidationError("piece atom outside [0, len)");
  if (!content.steps().empty() && len < content.steps().back().end)
    throw ValidationError("piece step outside [0, len)");
}

bool Piece::is_lebesgue_multiple() const { return lebesgue_density().has_value(); }

std::optional<Rational> Piece::lebesgue_density() const {
  if (!content.atoms().empty()) return std::nullopt;
  if (content.steps().empty()) return Rational(0);
  if (content.steps().size() == 1 && content.steps()[0].start.is_zero() && content.steps()[0].end == len)
    return content.steps()[0].value;
  return std::nullopt;
}

Piece zero_piece(const ExactLength& len, std::string label) { return Piece(len, PieceContent{}, std::move(label)); }

Piece atom_piece(const ExactLength& len, const Rational& weight, std::string label) {
  return Piece(len, PieceContent::normalized({Atom{ExactLength(len.basis()), weight}}, {}), std::move(label));
}

Piece step_piece(const ExactLength& len, const ExactLength& start, const ExactLength& end, const Rational& value,
                 std::string label) {
  return Piece(len, PieceContent::normalized({}, {Step{start, end, value}}), std::move(label));
}

// ---------------------------------------------------------------------------
// MeasureWindow / ColoredDeloneSet

MeasureWindow::MeasureWindow(ExactLength origin, ExactLength end, PieceContent content)
    : origin_(std::move(origin)), end_(std::move(end)), content_(std::move(content)) {
  if (!(origin_ < end_)) throw ValidationError("window end must exceed its origin");
  if (auto lo = content_.support_min(); lo && *lo < origin_) throw ValidationError("window content before origin");
  if (!content_.atoms().empty() && !(content_.atoms().back().at < end_))
    throw ValidationError("window atom at or beyond its end");
  if (!content_.steps().empty() && end_ < content_.steps().back().end)
    throw ValidationError("window step beyond its end");
}

MeasureWindow MeasureWindow::from_piece(const ExactLength& origin, const Piece& p) {
  return MeasureWindow(origin, origin + p.len, p.content.translated(origin));
}

Piece MeasureWindow::as_piece() const { return Piece(length(), content_.translated(-origin_)); }

ColoredDeloneSet::ColoredDeloneSet(std::vector<ExactLength> pts, std::vector<int> cols)
    : points(std::move(pts)), colors(std::move(cols)) {
  if (points.size() != colors.size()) throw ValidationError("every point needs a color");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i])) throw ValidationError("Delone points must be strictly increasing");
  for (int c : colors)
    if (c < 0) throw ValidationError("negative color index");
}

ColoredDeloneSet ColoredDeloneSet::monochrome(std::vector<ExactLength> pts) {
  std::vector<int> cols(pts.size(), 0);
  return ColoredDeloneSet(std::move(pts), std::move(cols));
}

// ---------------------------------------------------------------------------
// Operations

Piece concat(std::span<const Piece> pieces) {
  if (pieces.empty()) throw ValidationError("concatenation of an empty list");
  const Basis* basis = pieces.front().len.basis();
  ExactLength offset(basis);
  std::vector<Atom> atoms;
  std::vector<Step> steps;
  for (const auto& p : pieces) {
    if (p.len.basis() != basis) throw BasisMismatch();
    for (const auto& a : p.content.atoms()) atoms.push_back(Atom{a.at + offset, a.weight});
    for (const auto& s : p.content.steps()) append_merging(steps, Step{s.start + offset, s.end + offset, s.value});
    offset += p.len;
  }
  PieceContent c = PieceContent::normalized(std::move(atoms), std::move(steps));
  return Piece(offset, std::move(c));
}

Piece restrict(const MeasureWindow& w, const ExactLength& x, const ExactLength& len) {
  ExactLength hi = x + len;
  if (x < w.origin() || w.end() < hi || len.sign() <= 0)
    throw ValidationError("restriction [" + x.str() + ", " + hi.str() + ") is not inside the window [" +
                          w.origin().str() + ", " + w.end().str() + ")");
  return Piece(len, w.content().restricted(x, hi).translated(-x));
}

Occurrences occurrences(const MeasureWindow& w, const Piece& p) {
  Occurrences out;
  if (w.length() < p.len) return out;
  const ExactLength last = w.end() - p.len;

  // Features of p that the window must reproduce at x + offset.
  std::optional<ExactLength> first_feature;
  if (!p.content.atoms().empty()) first_feature = p.content.atoms().front().at;
  for (const auto& s : p.content.steps()) {
    if (s.start.sign() > 0) {
      if (!first_feature || s.start < *first_feature) first_feature = s.start;
      break;
    }
    if (s.end < p.len) {
      if (!first_feature || s.end < *first_feature) first_feature = s.end;
      break;
    }
  }

  if (first_feature) {
    std::vector<ExactLength> candidates;
    for (const auto& t : w.content().breakpoints()) {
      ExactLength x = t - *first_feature;
      if (x < w.origin() || last < x) continue;
      candidates.push_back(std::move(x));
    }
    std::sort(candidates.begin(), candidates.end(), less_pos);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto& x : candidates)
      if (restrict(w, x, p.len) == p) out.points.push_back(std::move(x));
    return out;
  }

  // p is c * Lebesgue on [0, len): occurrences form ranges.
  const Rational c = *p.lebesgue_density();
  std::vector<ExactLength> pts;
  pts.push_back(w.origin());
  for (const auto& t : w.content().breakpoints())
    if (w.origin() < t) pts.push_back(t);
  pts.push_back(w.end());
  const auto& atoms = w.content().atoms();
  std::size_t ai = 0;
  auto atom_at = [&](const ExactLength& u) {
    while (ai < atoms.size() && atoms[ai].at < u) ++ai;
    return ai < atoms.size() && atoms[ai].at == u;
  };
  std::optional<ExactLength> run_start;
  bool run_open = false;
  auto close = [&](const ExactLength& v) {
    ExactLength hi = v - p.len;
    int s = (hi - *run_start).sign();
    if (s > 0 || (s == 0 && !run_open)) out.ranges.push_back(OccurrenceRange{*run_start, hi, run_open});
    run_start.reset();
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const ExactLength& u = pts[i];
    bool atom_here = atom_at(u);
    if (w.content().density_at(u) == c) {
      if (run_start && atom_here) close(u);
      if (!run_start) {
        run_start = u;
        run_open = atom_here;
      }
    } else if (run_start) {
      close(u);
    }
  }
  if (run_start) close(w.end());
  return out;
}

namespace {

struct PatchKey {
  std::vector<std::pair<ExactLength, int>> entries;
  friend bool operator==(const PatchKey&, const PatchKey&) = default;
};

struct PatchKeyHash {
  std::size_t operator()(const PatchKey& k) const {
    std::size_t h = k.entries.size();
    for (const auto& [x, c] : k.entries) h = h * 1000003u ^ (x.hash() + static_cast<std::size_t>(c) * 7919u);
    return h;
  }
};

}  // namespace

PointSetReport analyze_point_set(const ColoredDeloneSet& d, const ExactLength& r, const ExactLength& big_r,
                                 const ExactLength& patch_radius) {
  if (d.points.empty()) throw ValidationError("empty point set");
  if (r.sign() <= 0 || big_r.sign() <= 0 || patch_radius.sign() <= 0)
    throw ValidationError("r, R and L must be positive");
  PointSetReport rep;
  rep.is_delone = true;
  const ExactLength two_r = r * Rational(2);
  for (std::size_t i = 1; i < d.size(); ++i) {
    ExactLength gap = d.points[i] - d.points[i - 1];
    if (gap < two_r || big_r < gap) {
      rep.is_delone = false;
      break;
    }
  }
  std::unordered_set<PatchKey, PatchKeyHash> patches;
  const ExactLength& lo = d.points.front();
  const ExactLength& hi = d.points.back();
  std::size_t left = 0;
  std::size_t right = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const ExactLength& x = d.points[i];
    if (x - patch_radius < lo || hi < x + patch_radius) continue;
    while (d.points[left] < x - patch_radius) ++left;
    if (right < i) right = i;
    while (right + 1 < d.size() && !(x + patch_radius < d.points[right + 1])) ++right;
    PatchKey key;
    for (std::size_t j = left; j <= right; ++j) key.entries.emplace_back(d.points[j] - x, d.colors[j]);
    patches.insert(std::move(key));
    ++rep.centers_examined;
  }
  rep.patch_count = patches.size();
  return rep;
}

MeasureWindow convolve(const ColoredDeloneSet& d, std::span<const Piece> profiles) {
  if (d.points.empty()) throw ValidationError("convolution with an empty point set");
  std::vector<Atom> atoms;
  std::vector<Step> steps;
  std::optional<ExactLength> end;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto color = static_cast<std::size_t>(d.colors[i]);
    if (color >= profiles.size()) throw ValidationError("no profile for color " + std::to_string(color));
    const Piece& prof = profiles[color];
    const ExactLength& x = d.points[i];
    for (const auto& a : prof.content.atoms()) atoms.push_back(Atom{a.at + x, a.weight});
    for (const auto& s : prof.content.steps()) steps.push_back(Step{s.start + x, s.end + x, s.value});
    ExactLength e = x + prof.len;
    if (!end || *end < e) end = e;
  }
  return MeasureWindow(d.points.front(), *end, PieceContent::normalized(std::move(atoms), std::move(steps)));
}

bool check_translation_bound(const MeasureWindow& w, long double bound) {
  if (bound < 0) throw ValidationError("translation bound must be nonnegative");
  const long double a = w.origin().value();
  const long double b = w.end().value();
  // Sorted knots q_i with |mu|([a, q_i)) and the atom mass sitting at q_i.
  std::vector<long double> q;
  std::vector<long double> before;
  std::vector<long double> at;
  std::vector<long double> dens;  // |density| on [q_i, q_{i+1})
  {
    std::vector<ExactLength> knots;
    knots.push_back(w.origin());
    for (const auto& t : w.content().breakpoints())
      if (w.origin() < t) knots.push_back(t);
    knots.push_back(w.end());
    std::size_t ai = 0;
    const auto& atoms = w.content().atoms();
    long double acc = 0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      long double m = 0;
      while (ai < atoms.size() && atoms[ai].at == knots[i]) m += std::fabs(atoms[ai++].weight.to_long_double());
      long double d = std::fabs(w.content().density_at(knots[i]).to_long_double());
      q.push_back(knots[i].value());
      before.push_back(acc);
      at.push_back(m);
      dens.push_back(i + 1 < knots.size() ? d : 0);
      if (i + 1 < knots.size()) acc += m + d * (knots[i + 1].value() - knots[i].value());
    }
  }
  auto index_le = [&](long double x) {
    auto it = std::upper_bound(q.begin(), q.end(), x);
    return it == q.begin() ? std::size_t{0} : static_cast<std::size_t>(it - q.begin() - 1);
  };
  // |mu|([a, x)) and |mu|([a, x])
  auto mass_open = [&](long double x) {
    std::size_t i = index_le(x);
    long double m = before[i] + dens[i] * (x - q[i]);
    if (x > q[i]) m += at[i];
    return m;
  };
  auto mass_closed = [&](long double x) {
    std::size_t i = index_le(x);
    long double m = mass_open(x);
    if (x == q[i]) m += at[i];
    return m;
  };
  const long double total = mass_closed(b);
  const long double tol = 1e-12L * std::max<long double>(1, total);

  // |J| <= 1: the worst J has length min(1, b - a).
  const long double span1 = std::min<long double>(1, b - a);
  for (long double p : q) {
    for (long double s : {p, p - span1}) {
      s = std::clamp(s, a, b - span1);
      if (mass_closed(s + span1) - mass_open(s) > bound + tol) return false;
    }
  }
  if (b - a <= 1) return true;

  // |J| >= 1: max over t of (F(t) - C t) - min over s <= t - 1 of (F(s-) - C s).
  std::vector<long double> h(q.size());
  std::vector<long double> hmin(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    h[i] = mass_open(q[i]) - bound * q[i];
    hmin[i] = i == 0 ? h[i] : std::min(hmin[i - 1], h[i]);
  }
  std::vector<long double> ts;
  for (long double p : q) {
    ts.push_back(p);
    ts.push_back(p + 1);
  }
  for (long double t : ts) {
    if (t < a + 1 || t > b) continue;
    long double s_max = t - 1;
    long double best = mass_open(s_max) - bound * s_max;
    std::size_t i = index_le(s_max);
    best = std::min(best, hmin[i]);
    if (mass_closed(t) - bound * t - best > tol) return false;
  }
  return true;
}

}  // namespace qlc
