#include "qlc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlc/errors.hpp"
#include "qlc/parallel.hpp"

namespace qlc {
namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double sinc(long double t) {
  if (std::fabs(t) < 1e-4L) {
    long double t2 = t * t;
    return 1 - t2 / 6 + t2 * t2 / 120;
  }
  return std::sin(t) / t;
}

long double sinhc(long double t) {
  if (std::fabs(t) < 1e-4L) {
    long double t2 = t * t;
    return 1 + t2 / 6 + t2 * t2 / 120;
  }
  return std::sinh(t) / t;
}

}  // namespace

long double Mat2::frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

void ScaledMat2::apply(const Mat2& f, long double extra_log) {
  m = f * m;
  long double n = m.frobenius();
  m.a /= n;
  m.b /= n;
  m.c /= n;
  m.d /= n;
  logscale += std::log(n) + extra_log;
}

Mat2 ScaledMat2::recomposed() const {
  long double s = std::exp(logscale);
  return {m.a * s, m.b * s, m.c * s, m.d * s};
}

long double ScaledMat2::log_norm() const { return logscale + std::log(m.frobenius()); }

long double ScaledMat2::true_trace() const { return m.trace() * std::exp(logscale); }

Mat2 segment_matrix(long double len, long double q, long double* log_factor) {
  if (log_factor) *log_factor = 0;
  if (q == 0) return {1, len, 0, 1};
  if (q > 0) {
    long double k = std::sqrt(q), t = k * len;
    long double cs = std::cos(t), sc = len * sinc(t);
    return {cs, sc, -q * sc, cs};
  }
  long double kappa = std::sqrt(-q), t = kappa * len;
  if (log_factor && t > 30) {
    // cosh t = e^t (1 + e^{-2t}) / 2, sinh t = e^t (1 - e^{-2t}) / 2
    long double e = std::exp(-2 * t);
    *log_factor = t;
    long double ch = (1 + e) / 2, sh = (1 - e) / 2;
    return {ch, sh / kappa, kappa * sh, ch};
  }
  long double ch = std::cosh(t), sh = len * sinhc(t);
  return {ch, sh, -q * sh, ch};
}

Mat2 atom_matrix(long double weight) { return {1, 0, weight, 1}; }

TransferProgram TransferProgram::compile(const PieceContent& content, const ExactLength& lo, const ExactLength& hi) {
  if (hi < lo) throw ValidationError("program range is reversed");
  TransferProgram prog;
  prog.length_ = (hi - lo).value();
  const auto& atoms = content.atoms();
  const auto& steps = content.steps();
  auto ai = std::lower_bound(atoms.begin(), atoms.end(), lo, [](const Atom& a, const ExactLength& x) { return a.at < x; });
  auto si = std::upper_bound(steps.begin(), steps.end(), lo, [](const ExactLength& x, const Step& s) { return x < s.end; });
  ExactLength pos = lo;
  while (true) {
    if (ai != atoms.end() && ai->at == pos && pos < hi) {
      prog.ops_.push_back({true, ai->weight.to_long_double(), 0});
      ++ai;
    }
    if (!(pos < hi)) break;
    ExactLength next = hi;
    if (ai != atoms.end() && ai->at < next) next = ai->at;
    long double v = 0;
    if (si != steps.end()) {
      if (pos < si->start) {
        if (si->start < next) next = si->start;
      } else {
        v = si->value.to_long_double();
        if (si->end < next) next = si->end;
      }
    }
    prog.ops_.push_back({false, v, (next - pos).value()});
    pos = next;
    if (si != steps.end() && si->end == pos) ++si;
  }
  return prog;
}

TransferProgram TransferProgram::compile(const Piece& p) {
  ExactLength zero(p.len.basis());
  return compile(p.content, zero, p.len);
}

ScaledMat2 TransferProgram::run(long double energy) const {
  ScaledMat2 s;
  for (const auto& op : ops_) {
    if (op.atom) {
      s.apply(atom_matrix(op.value));
    } else {
      long double lf = 0;
      Mat2 f = segment_matrix(op.len, energy - op.value, &lf);
      s.apply(f, lf);
    }
  }
  return s;
}

Mat2 TransferProgram::run_unscaled(long double energy) const {
  Mat2 m;
  for (const auto& op : ops_) m = (op.atom ? atom_matrix(op.value) : segment_matrix(op.len, energy - op.value)) * m;
  return m;
}

Mat2 transfer_matrix(const Piece& p, long double energy) { return TransferProgram::compile(p).run_unscaled(energy); }

ScaledMat2 propagate(const MeasureWindow& w, long double energy) { return TransferProgram::compile(w).run(energy); }

long double discriminant(const TransferProgram& period, long double energy) { return period.run(energy).true_trace(); }

BandStructure floquet_bands(const Piece& period, long double emin, long double emax, long double resolution) {
  return floquet_bands(TransferProgram::compile(period), emin, emax, resolution);
}

BandStructure floquet_bands(const TransferProgram& period, long double emin, long double emax,
                            long double resolution) {
  if (!(emax > emin)) throw ValidationError("energy range is empty");
  if (!(resolution > 0)) throw ValidationError("resolution must be positive");
  const std::size_t n = static_cast<std::size_t>(std::ceil((emax - emin) / resolution));
  std::vector<long double> es(n + 1), ds(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    es[i] = i == n ? emax : emin + (emax - emin) * static_cast<long double>(i) / static_cast<long double>(n);
    ds[i] = discriminant(period, es[i]);
  }
  auto g = [&](long double e) { return std::fabs(discriminant(period, e)) - 2; };
  auto inside = [](long double d) { return std::fabs(d) <= 2; };
  // edge between an outside point `out` and an inside point `in`
  auto edge = [&](long double out, long double in) {
    while (std::fabs(in - out) > kBandEdgeTolerance) {
      long double mid = (out + in) / 2;
      (g(mid) <= 0 ? in : out) = mid;
    }
    return (out + in) / 2;
  };

  std::vector<Band> found;
  for (std::size_t i = 0; i <= n;) {
    if (!inside(ds[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && inside(ds[j + 1])) ++j;
    long double lo = i == 0 ? es[0] : edge(es[i - 1], es[i]);
    long double hi = j == n ? es[n] : edge(es[j + 1], es[j]);
    found.push_back({lo, hi});
    i = j + 1;
  }
  // Bands narrower than a grid cell: D jumps across [-2, 2] between two
  // outside points, or |D| has an interior local minimum below 2.
  for (std::size_t i = 0; i < n; ++i) {
    if (inside(ds[i]) || inside(ds[i + 1])) continue;
    if ((ds[i] > 0) != (ds[i + 1] > 0)) {
      long double a = es[i], b = es[i + 1];
      while (b - a > kBandEdgeTolerance) {
        long double mid = (a + b) / 2;
        ((discriminant(period, mid) > 0) == (ds[i] > 0) ? a : b) = mid;
      }
      long double r = (a + b) / 2;
      if (g(r) <= 0) found.push_back({edge(es[i], r), edge(es[i + 1], r)});
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (inside(ds[i - 1]) || inside(ds[i]) || inside(ds[i + 1])) continue;
    if ((ds[i - 1] > 0) != (ds[i] > 0) || (ds[i] > 0) != (ds[i + 1] > 0)) continue;
    long double m0 = std::fabs(ds[i]);
    if (!(m0 <= std::fabs(ds[i - 1]) && m0 <= std::fabs(ds[i + 1]))) continue;
    long double a = es[i - 1], b = es[i + 1];
    const long double invphi = (std::sqrt(5.0L) - 1) / 2;
    long double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    long double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80 && b - a > kBandEdgeTolerance && f1 > 0 && f2 > 0; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = g(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = g(x2);
      }
    }
    long double best = f1 <= 0 ? x1 : (f2 <= 0 ? x2 : NAN);
    if (!std::isnan(best)) found.push_back({edge(es[i - 1], best), edge(es[i + 1], best)});
  }

  std::sort(found.begin(), found.end(), [](const Band& x, const Band& y) { return x.lo < y.lo; });
  BandStructure out;
  out.grid_points = n + 1;
  for (const auto& b : found) {
    if (!out.bands.empty() && b.lo <= out.bands.back().hi + kBandEdgeTolerance) {
      out.bands.back().hi = std::max(out.bands.back().hi, b.hi);
    } else {
      out.bands.push_back(b);
    }
  }
  for (const auto& b : out.bands) out.total_measure += b.hi - b.lo;
  return out;
}

LyapunovEstimate lyapunov(std::span<const TransferProgram> samples, long double energy) {
  if (samples.empty()) throw ValidationError("lyapunov needs at least one sample");
  std::vector<long double> g;
  for (const auto& p : samples) {
    if (!(p.length() > 0)) throw ValidationError("lyapunov sample window has zero length");
    g.push_back(p.run(energy).log_norm() / p.length());
  }
  LyapunovEstimate est;
  est.samples = g.size();
  long double sum = 0;
  for (auto v : g) sum += v;
  est.gamma = sum / static_cast<long double>(g.size());
  if (g.size() > 1) {
    long double ss = 0;
    for (auto v : g) ss += (v - est.gamma) * (v - est.gamma);
    est.stderr_ = std::sqrt(ss / static_cast<long double>(g.size() - 1) / static_cast<long double>(g.size()));
  }
  return est;
}

LyapunovEstimate lyapunov(const std::function<MeasureWindow(std::size_t)>& supplier, std::size_t samples,
                          long double energy) {
  std::vector<TransferProgram> progs;
  for (std::size_t i = 0; i < samples; ++i) progs.push_back(TransferProgram::compile(supplier(i)));
  return lyapunov(progs, energy);
}

std::size_t dirichlet_eigencount(const MeasureWindow& w, long double energy) {
  return dirichlet_eigencount(TransferProgram::compile(w), energy);
}

std::size_t dirichlet_eigencount(const TransferProgram& prog, long double energy) {
  const auto& ops = prog.ops();
  std::size_t last_segment = ops.size();
  for (std::size_t i = ops.size(); i-- > 0;)
    if (!ops[i].atom) {
      last_segment = i;
      break;
    }
  long double u = 0, up = 1;
  long long count = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    if (op.atom) {
      up += op.value * u;
      continue;
    }
    const bool last = i == last_segment;
    const long double q = energy - op.value;
    if (q > 0) {
      long double k = std::sqrt(q);
      long double psi0 = std::atan2(u, up / k);
      long double psi1 = psi0 + k * op.len;
      long double f0 = std::floor(psi0 / kPi);
      count += static_cast<long long>(last ? std::ceil(psi1 / kPi) - 1 - f0 : std::floor(psi1 / kPi) - f0);
      u = std::sin(psi1);
      up = k * std::cos(psi1);
    } else {
      long double lf = 0;
      Mat2 f = segment_matrix(op.len, q, &lf);
      long double u1 = f.a * u + f.b * up, up1 = f.c * u + f.d * up;
      if (u != 0 && ((u > 0 && u1 < 0) || (u < 0 && u1 > 0))) ++count;
      if (u != 0 && u1 == 0 && !last) ++count;
      u = u1;
      up = up1;
    }
    long double s = std::max(std::fabs(u), std::fabs(up));
    if (s > 0) {
      u /= s;
      up /= s;
    }
  }
  return static_cast<std::size_t>(std::max<long long>(count, 0));
}

long double trace_map_step(long double xk, long double xk1, long double xk2) { return 2 * xk * xk1 - xk2; }

TraceSequence fibonacci_trace_sequence(long double energy, long double c, std::size_t n) {
  const long double phi = (1 + std::sqrt(5.0L)) / 2;
  TraceSequence ts;
  for (std::size_t k = 0; k <= n; ++k) {
    Word w = fibonacci_word(k);
    ScaledMat2 s;
    for (int sym : w.symbols) {
      s.apply(atom_matrix(c));
      long double lf = 0;
      Mat2 f = segment_matrix(sym == 0 ? 1.0L : phi, energy, &lf);
      s.apply(f, lf);
    }
    long double x = s.true_trace() / 2;
    if (!std::isfinite(x)) break;
    ts.x.push_back(x);
  }
  ts.effective_order = ts.x.empty() ? 0 : ts.x.size() - 1;
  if (ts.effective_order < n)
    throw std::overflow_error("half-traces overflow beyond order " + std::to_string(ts.effective_order));
  const auto& x = ts.x;
  ts.recursion_residual.assign(x.size(), 0);
  for (std::size_t k = 2; k + 1 < x.size(); ++k) {
    long double pred = trace_map_step(x[k], x[k - 1], x[k - 2]);
    long double scale = std::max({1.0L, std::fabs(x[k + 1]), std::fabs(2 * x[k] * x[k - 1]), std::fabs(x[k - 2])});
    ts.recursion_residual[k + 1] = std::fabs(x[k + 1] - pred) / scale;
    ts.max_recursion_residual = std::max(ts.max_recursion_residual, ts.recursion_residual[k + 1]);
  }
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    long double a = x[k + 1], b = x[k], d = x[k - 1];
    ts.invariant.push_back(a * a + b * b + d * d - 2 * a * b * d - 1);
  }
  for (std::size_t i = 1; i < ts.invariant.size(); ++i) {
    std::size_t k = i + 1;
    long double a = x[k + 1], b = x[k], d = x[k - 1];
    long double scale = std::max({1.0L, a * a, b * b, d * d, std::fabs(2 * a * b * d)});
    ts.max_invariant_drift = std::max(ts.max_invariant_drift, std::fabs(ts.invariant[i] - ts.invariant[0]) / scale);
  }
  return ts;
}

std::vector<ScanRecord> spectral_scan(const TransferProgram& prog, std::span<const long double> energies,
                                      unsigned threads) {
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (!(energies[i - 1] < energies[i])) throw ValidationError("scan energies must be strictly increasing");
  std::vector<ScanRecord> out(energies.size());
  parallel_for(energies.size(), threads, [&](std::size_t i) {
    ScaledMat2 s = prog.run(energies[i]);
    ScanRecord& r = out[i];
    r.energy = energies[i];
    r.trace = s.m.trace();
    r.logscale = s.logscale;
    r.gamma = prog.length() > 0 ? s.log_norm() / prog.length() : 0;
    r.band = std::fabs(s.true_trace()) <= 2;
  });
  return out;
}

TransferProgram fibonacci_kp_program(std::size_t order, const Rational& c) {
  return TransferProgram::compile(suspend_with_profiles(fibonacci_word(order), fibonacci_kp_params(c)));
}

TransferProgram periodic_kp_program(std::size_t cells, const Rational& c) {
  if (cells == 0) throw ValidationError("need at least one cell");
  const Basis* u = Basis::unit();
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < cells; ++i) atoms.push_back({ExactLength(u, {Rational(static_cast<std::int64_t>(i))}), c});
  MeasureWindow w(ExactLength(u), ExactLength(u, {Rational(static_cast<std::int64_t>(cells))}),
                  PieceContent::normalized(std::move(atoms), {}));
  return TransferProgram::compile(w);
}

}  // namespace qlc
