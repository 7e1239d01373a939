#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "aderdg/basis.hpp"
#include "aderdg/corrector.hpp"
#include "aderdg/kernels.hpp"
#include "aderdg/layout.hpp"
#include "aderdg/pde.hpp"

namespace aderdg {

enum class CellStatus : std::uint8_t { kOk = 0, kTroubled = 1, kNeighbor = 2 };

struct DmpOptions {
  double delta0 = 1e-4;
  double epsilon = 1e-3;
};

/// Tensor-product subcell projection / recovery for one element. Owns scratch.
class SubcellTransform {
 public:
  explicit SubcellTransform(const BasisTables& tables, int dims, int m);

  /// (N+1)^d nodal values -> (2N+1)^d subcell averages.
  void project(std::span<const double> u, std::span<double> sub);
  /// (2N+1)^d subcell averages -> (N+1)^d nodal values, mean preserving.
  void recover(std::span<const double> sub, std::span<double> u);

 private:
  void apply(const Matrix& op, std::span<const double> in, std::span<double> out, int from_extent, int to_extent);

  const BasisTables& tables_;
  ElementLayout layout_;
  std::vector<double> a_, b_;
};

/// Per-quantity [min, max] bounds of a block of subcell averages, merged into lo/hi.
void merge_bounds(std::span<const double> sub, int m, std::span<double> lo, std::span<double> hi);

/// True if any candidate average leaves [lo - delta, hi + delta] with
/// delta = max(delta0, epsilon (hi - lo)) per quantity.
bool dmp_violated(std::span<const double> candidate, int m, std::span<const double> lo, std::span<const double> hi,
                  const DmpOptions& options);

/// Second-order MUSCL-Hancock update of one element's subcell grid, using a
/// patch of (2N+1+4)^d subcell averages (two halo layers taken from the full
/// neighbourhood, diagonals included).
class SubcellSolver {
 public:
  SubcellSolver(const PdeSystem& system, const BasisTables& tables, bool primitive, int batch_width = 8,
                EvalMode mode = EvalMode::kBatched);

  int patch_extent() const { return pext_; }
  std::size_t patch_size() const { return static_cast<std::size_t>(npatch_) * layout_.m; }
  /// 2 (lower/upper) blocks of nsubface*m values per face, faces ordered 2*dir+side.
  std::size_t face_flux_size() const { return static_cast<std::size_t>(2 * layout_.dims) * 2 * layout_.nsubface * layout_.m; }

  /// Advances the core of `patch` (conserved averages) by dt. Writes the new
  /// core averages to `out` and the subface contributions on the element
  /// boundary to `face_flux`. Subcells whose reconstructed states are
  /// inadmissible drop to first order. Returns false if any new average is
  /// inadmissible.
  bool step(std::span<const double> patch, const std::array<double, 3>& dx_sub, double dt, std::span<double> out,
            std::span<double> face_flux, bool first_order = false);

  /// Number of subcells that fell back to first order in the last step.
  int fallbacks() const { return fallbacks_; }

 private:
  int pidx(const std::array<int, 3>& i) const { return i[0] + pext_ * (i[1] + pext_ * i[2]); }

  const PdeSystem& sys_;
  const BasisTables& tables_;
  ElementLayout layout_;
  bool primitive_;
  int pext_;
  int npatch_;
  Corrector faces_;
  BatchEvaluator eval_;
  int fallbacks_ = 0;

  std::vector<double> w_, slope_[3], lo_[3], hi_[3], qt_, pt_, pt2_, pt3_, fl_, fr_, l_;
  std::vector<double> fqL_, fqR_, fFL_, fFR_, fgl_[3], fgu_[3];
  std::vector<double> grad_pt_[3];
  std::vector<unsigned char> first_;
};

}  // namespace aderdg
