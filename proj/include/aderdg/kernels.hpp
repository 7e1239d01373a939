#pragma once

#include <array>
#include <span>
#include <vector>

#include "aderdg/basis.hpp"
#include "aderdg/pde.hpp"

namespace aderdg {

// ---------------------------------------------------------------- tensor layout

/// Extents of an AoS tensor-product array: quantity index fastest, then up to
/// four node dimensions (x, y, z, t) in that order.
struct TensorShape {
  int m = 1;
  int ndims = 0;
  std::array<int, 4> extent{1, 1, 1, 1};

  int points() const {
    int n = 1;
    for (int i = 0; i < ndims; ++i) n *= extent[i];
    return n;
  }
  int size() const { return m * points(); }
  int inner(int dir) const {
    int n = m;
    for (int i = 0; i < dir; ++i) n *= extent[i];
    return n;
  }
  int outer(int dir) const {
    int n = 1;
    for (int i = dir + 1; i < ndims; ++i) n *= extent[i];
    return n;
  }
  TensorShape with_extent(int dir, int e) const {
    TensorShape s = *this;
    s.extent[dir] = e;
    return s;
  }
};

/// Applies the 1D operator `a` along dimension `dir`:
/// out[..., r, ...] = sum_c a(r, c) in[..., c, ...].
/// The sum is evaluated pairwise from both ends of the index range so that
/// reflected inputs with a reflection-symmetric operator give exactly
/// reflected outputs.
void contract(const Matrix& a, std::span<const double> in, const TensorShape& in_shape, int dir, std::span<double> out);

// ---------------------------------------------------------------- AoS <-> SoA

/// AoS block of `width` states with m quantities -> SoA (quantity-major).
void aos_to_soa(std::span<const double> aos, int width, int m, std::span<double> soa);
void soa_to_aos(std::span<const double> soa, int width, int m, std::span<double> aos);

// ---------------------------------------------------------------- batched PDE evaluation

enum class EvalMode { kBatched, kScalar };

/// Evaluates PDE terms over AoS point arrays. In batched mode the points are
/// processed in SoA blocks of `width` lanes; the scalar mode is the reference
/// loop and gives bitwise identical results.
class BatchEvaluator {
 public:
  BatchEvaluator(const PdeSystem& system, int width, EvalMode mode = EvalMode::kBatched);

  int width() const { return width_; }
  EvalMode mode() const { return mode_; }
  const PdeSystem& system() const { return sys_; }

  void flux(const double* q, int npts, int dir, double* f);
  /// grad[d] points to an AoS array of the same layout as q.
  void ncp(const double* q, std::array<const double*, 3> grad, int npts, double* out);
  void source(const double* q, int npts, double* out);
  void primitive_quasilinear(const double* v, std::array<const double*, 3> grad, int npts, double* out);
  void max_wave_speed(const double* q, int npts, int dir, double* out);
  /// Per-point admissibility flags; returns true iff all points are admissible.
  bool admissible(const double* q, int npts, std::span<unsigned char> flags);
  bool all_admissible(const double* q, int npts);

 private:
  template <typename Kernel>
  void run_blocks(const double* q, std::array<const double*, 3> grad, int ngrad, int npts, double* out, Kernel&& kernel);

  const PdeSystem& sys_;
  int width_;
  EvalMode mode_;
  int m_;
  std::vector<double> q_soa_;
  std::array<std::vector<double>, 3> g_soa_;
  std::vector<double> out_soa_;
};

// ---------------------------------------------------------------- cost metric

struct TduReport {
  double wct_s = 0.0;
  double elements = 0.0;  ///< elements per worker
  long steps = 0;
  int order = 0;
  int dim = 0;
  double tdu_us = 0.0;
};

/// Time per degree-of-freedom update: WCT / (elements * steps * (N+1)^d), in microseconds.
TduReport tdu(double wct_s, double elements_per_worker, long steps, int order, int dim);

}  // namespace aderdg
