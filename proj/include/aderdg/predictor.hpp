#pragma once

#include <array>
#include <span>
#include <vector>

#include "aderdg/basis.hpp"
#include "aderdg/kernels.hpp"
#include "aderdg/layout.hpp"
#include "aderdg/pde.hpp"

namespace aderdg {

enum class PredictorMode { kConservative, kPrimitive };
enum class InitialGuess { kAuto, kMuscl, kOrder3 };
enum class PredictorStatus { kConverged, kNotConverged, kInadmissible };

struct PredictorOptions {
  PredictorMode mode = PredictorMode::kConservative;
  InitialGuess guess = InitialGuess::kAuto;
  double tolerance = 1e-12;
  int max_iterations = -1;  ///< -1 selects 2N+2
};

struct PredictorResult {
  int iterations = 0;
  double residual = 0.0;
  PredictorStatus status = PredictorStatus::kConverged;
  bool guess_fallback = false;  ///< order-3 guess was inadmissible, MUSCL used
};

/// Boundary-extrapolated space-time values and normal fluxes on the 2d faces
/// of one element. Face f = 2*dir + side (side 0: lower, 1: upper). Each face
/// block holds (N+1)^d points: the remaining spatial dimensions in increasing
/// order, then time.
struct FaceTraces {
  std::vector<double> values;
  std::vector<double> flux;

  std::span<double> face_values(int face, const ElementLayout& l) {
    return {values.data() + static_cast<std::size_t>(face) * l.nface_st * l.m, static_cast<std::size_t>(l.nface_st) * l.m};
  }
  std::span<const double> face_values(int face, const ElementLayout& l) const {
    return {values.data() + static_cast<std::size_t>(face) * l.nface_st * l.m, static_cast<std::size_t>(l.nface_st) * l.m};
  }
  std::span<double> face_flux(int face, const ElementLayout& l) {
    return {flux.data() + static_cast<std::size_t>(face) * l.nface_st * l.m, static_cast<std::size_t>(l.nface_st) * l.m};
  }
  std::span<const double> face_flux(int face, const ElementLayout& l) const {
    return {flux.data() + static_cast<std::size_t>(face) * l.nface_st * l.m, static_cast<std::size_t>(l.nface_st) * l.m};
  }
};

/// Element-local space-time predictor. One instance per worker; it owns the
/// scratch buffers and is not thread-safe.
class Predictor {
 public:
  Predictor(const PdeSystem& system, const BasisTables& tables, int batch_width = 8, EvalMode mode = EvalMode::kBatched);

  const ElementLayout& layout() const { return layout_; }

  /// S - div F - B grad u at the spatial nodes.
  void operator_L(std::span<const double> u, const std::array<double, 3>& dx, std::span<double> out);

  void initial_guess_muscl(std::span<const double> u, const std::array<double, 3>& dx, double dt, std::span<double> q);
  /// Returns false if u + dt k1 was inadmissible and the MUSCL guess was used instead.
  bool initial_guess_order3(std::span<const double> u, const std::array<double, 3>& dx, double dt, std::span<double> q);

  /// Discrete Picard iteration on the space-time weak form, starting from the
  /// guess stored in q. Stops when the increment satisfies
  /// rms(dq) <= tol (1 + rms(q)).
  PredictorResult picard_solve(std::span<double> q, std::span<const double> u, const std::array<double, 3>& dx, double dt,
                               double tolerance, int max_iterations);

  /// Guess + Picard + (in primitive mode) conversion back to conserved variables.
  PredictorResult predict(std::span<const double> u, const std::array<double, 3>& dx, double dt,
                          const PredictorOptions& options, std::span<double> q);

  /// rms(G(q) - q) / (1 + rms(q)) for the Picard map G (conservative form).
  double fixed_point_residual(std::span<const double> q, std::span<const double> u, const std::array<double, 3>& dx,
                              double dt);

  void extract_traces(std::span<const double> q, FaceTraces& traces);

 private:
  void rhs(std::span<const double> q, const TensorShape& shape, const std::array<double, 3>& dx, bool primitive,
           std::span<double> r);
  void guess_muscl_impl(std::span<const double> u, const std::array<double, 3>& dx, double dt, bool primitive,
                        std::span<double> q);
  bool guess_order3_impl(std::span<const double> u, const std::array<double, 3>& dx, double dt, bool primitive,
                         std::span<double> q);
  void picard_map(std::span<const double> q, std::span<const double> u, const std::array<double, 3>& dx, double dt,
                  bool primitive, std::span<double> q_new);
  PredictorResult picard_impl(std::span<double> q, std::span<const double> u, const std::array<double, 3>& dx, double dt,
                              double tolerance, int max_iterations, bool primitive);
  bool state_ok(std::span<const double> w, int npts, bool primitive);

  const PdeSystem& sys_;
  const BasisTables& tables_;
  ElementLayout layout_;
  BatchEvaluator eval_;

  std::vector<double> flux_, dflux_, ncp_, src_, r_, pr_, qnew_, k1_, k2_, tmp_, prim_u_, point_;
  std::array<std::vector<double>, 3> grad_;
};

}  // namespace aderdg
