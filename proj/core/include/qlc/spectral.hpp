#pragma once

// Transfer matrices for -u'' + mu u = E u with mu = atoms + piecewise constant
// density. A factor acts on column vectors (u, u'); propagating across p then
// q gives T(q) * T(p).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qlc/measure.hpp"
#include "qlc/symbolic.hpp"

namespace qlc {

struct Mat2 {
  long double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }
  long double det() const { return a * d - b * c; }
  long double trace() const { return a + d; }
  long double frobenius() const;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

// m * exp(logscale), with m kept at unit Frobenius norm.
struct ScaledMat2 {
  Mat2 m;
  long double logscale = 0;

  // this <- f * exp(extra_log) * this, then renormalize
  void apply(const Mat2& f, long double extra_log = 0);
  Mat2 recomposed() const;
  long double log_norm() const;  // log of the Frobenius norm of the true product
  long double true_trace() const;
};

// Free (constant potential v) segment of length `len` at energy E. For very
// long evanescent segments part of the growth is returned through log_factor.
Mat2 segment_matrix(long double len, long double e_minus_v, long double* log_factor = nullptr);
Mat2 atom_matrix(long double weight);

// A window compiled to float segment/atom operations, reusable across energies.
class TransferProgram {
 public:
  struct Op {
    bool atom = false;
    long double value = 0;  // atom weight or step density
    long double len = 0;    // segment length
  };

  TransferProgram() = default;
  static TransferProgram compile(const PieceContent& content, const ExactLength& lo, const ExactLength& hi);
  static TransferProgram compile(const MeasureWindow& w) { return compile(w.content(), w.origin(), w.end()); }
  static TransferProgram compile(const Piece& p);

  const std::vector<Op>& ops() const { return ops_; }
  long double length() const { return length_; }
  std::size_t factor_count() const { return ops_.size(); }

  ScaledMat2 run(long double energy) const;
  // Rescales only when an entry exceeds 1e300; for short products.
  Mat2 run_unscaled(long double energy) const;

 private:
  std::vector<Op> ops_;
  long double length_ = 0;
};

Mat2 transfer_matrix(const Piece& p, long double energy);
ScaledMat2 propagate(const MeasureWindow& w, long double energy);

struct Band {
  long double lo = 0;
  long double hi = 0;
};

struct BandStructure {
  std::vector<Band> bands;
  long double total_measure = 0;
  std::size_t grid_points = 0;
};

inline constexpr long double kBandEdgeTolerance = 1e-8L;

// Intervals of [emin, emax] where |trace of the period matrix| <= 2.
BandStructure floquet_bands(const Piece& period, long double emin, long double emax, long double resolution);
BandStructure floquet_bands(const TransferProgram& period, long double emin, long double emax, long double resolution);
long double discriminant(const TransferProgram& period, long double energy);

struct LyapunovEstimate {
  long double gamma = 0;
  long double stderr_ = 0;
  std::size_t samples = 0;
};

// gamma = log ||M|| / spatial length, averaged over the sample programs.
LyapunovEstimate lyapunov(std::span<const TransferProgram> samples, long double energy);
LyapunovEstimate lyapunov(const std::function<MeasureWindow(std::size_t)>& supplier, std::size_t samples,
                          long double energy);

// Number of Dirichlet eigenvalues strictly below E on the window.
std::size_t dirichlet_eigencount(const MeasureWindow& w, long double energy);
std::size_t dirichlet_eigencount(const TransferProgram& prog, long double energy);

struct TraceSequence {
  std::vector<long double> x;                 // x_0 .. x_n half-traces (direct products)
  std::vector<long double> recursion_residual;  // index k+1 >= 3: relative residual
  std::vector<long double> invariant;           // I_k for k = 1 .. n-1
  long double max_recursion_residual = 0;
  long double max_invariant_drift = 0;  // relative to I_1
  std::size_t effective_order = 0;
};

// x_{k+1} = 2 x_k x_{k-1} - x_{k-2}
long double trace_map_step(long double xk, long double xk1, long double xk2);
// Half-traces of the order-k Fibonacci Kronig-Penney transfer products
// (cells 1 and phi, atom c at each cell start), k = 0..n.
TraceSequence fibonacci_trace_sequence(long double energy, long double c, std::size_t n);

struct ScanRecord {
  long double energy = 0;
  long double trace = 0;  // of the normalized matrix
  long double logscale = 0;
  long double gamma = 0;
  bool band = false;
};

std::vector<ScanRecord> spectral_scan(const TransferProgram& prog, std::span<const long double> energies,
                                      unsigned threads = 1);

// Fibonacci KP program of the order-k word, cells 1 / phi, atom c at cell start.
TransferProgram fibonacci_kp_program(std::size_t order, const Rational& c);
// Periodic KP comb with `cells` unit cells.
TransferProgram periodic_kp_program(std::size_t cells, const Rational& c);

}  // namespace qlc
