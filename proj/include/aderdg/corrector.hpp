#pragma once

#include <array>
#include <span>
#include <vector>

#include "aderdg/basis.hpp"
#include "aderdg/kernels.hpp"
#include "aderdg/layout.hpp"
#include "aderdg/mesh.hpp"
#include "aderdg/pde.hpp"

namespace aderdg {

// ---------------------------------------------------------------- time step

/// Largest |eigenvalue| per direction over `npts` AoS states. Points with a
/// non-finite speed are skipped; returns false if every point was skipped.
bool max_speeds(const PdeSystem& sys, const double* q, int npts, std::array<double, 3>& lambda);

/// alpha / sum_d(lambda_d / dx_d); +inf if all speeds vanish.
double cfl_timestep(const std::array<double, 3>& lambda, const std::array<double, 3>& dx, int dims, double cfl);

/// Global minimum over all cells of the nodal CFL bound. Throws if the mesh is
/// empty or no cell has a finite wave speed.
double compute_timestep(const CartesianMesh& mesh, const PdeSystem& sys, int order, double cfl,
                        std::span<const double> u);

// ---------------------------------------------------------------- point-wise face physics

/// s_max = max(|lambda(q-)|, |lambda(q+)|) for the direction n.
double rusanov_theta(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                     std::span<const double> n);

/// Three-point Gauss-Legendre approximation of int_0^1 B(q- + s (q+ - q-)) . n ds,
/// as a dense m x m row-major matrix.
std::vector<double> path_integral_B(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                                    std::span<const double> n);

/// D- . n = 1/2 (F(q+) + F(q-)) . n + 1/2 (Btilde . n - s_max) (q+ - q-).
std::vector<double> riemann_Dminus(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                                   std::span<const double> n);

inline constexpr std::array<double, 3> kPathNodes{0.11270166537925831148, 0.5, 0.88729833462074168852};
inline constexpr std::array<double, 3> kPathWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// ---------------------------------------------------------------- element kernels

/// Element and face kernels of the one-step update for one polynomial degree.
/// One instance per worker (owns scratch space).
class Corrector {
 public:
  Corrector(const PdeSystem& system, const BasisTables& tables, int batch_width = 8, EvalMode mode = EvalMode::kBatched);

  const ElementLayout& layout() const { return layout_; }

  /// Volume terms from the space-time predictor q:
  /// vol[d] = K (time-averaged F_d) along d (unscaled by 1/dx), d blocks of nsp*m;
  /// ns = time-averaged (S - B grad q), nsp*m. Returns false if ns is unused.
  bool volume_terms(std::span<const double> q, const std::array<double, 3>& dx, std::span<double> vol,
                    std::span<double> ns);

  /// Rusanov/path-conservative face solve between the upper face trace of the
  /// lower element (qL, FL) and the lower face trace of the upper element
  /// (qR, FR), normal +e_dir. Outputs the time-averaged contributions for the
  /// lower element (g_lower = D-(qL, qR, +e)) and the upper one
  /// (g_upper = D-(qR, qL, -e)), each nface_sp*m.
  void face_flux(int dir, std::span<const double> qL, std::span<const double> FL, std::span<const double> qR,
                 std::span<const double> FR, std::span<double> g_lower, std::span<double> g_upper);

  /// Same solve at arbitrary points without time averaging: npts states.
  void face_flux_points(int dir, int npts, const double* qL, const double* FL, const double* qR, const double* FR,
                        double* g_lower, double* g_upper);

  /// u* = u + dt (sum_d C_d + ns), C_d = (vol_d - lift(face terms)) / dx_d.
  /// faces[2*d+side] is the time-averaged contribution on the element's face.
  void update(std::span<const double> u, std::span<const double> vol, std::span<const double> ns, bool has_ns,
              const std::array<std::span<const double>, 6>& faces, const std::array<double, 3>& dx, double dt,
              std::span<double> out);

  /// Unnormalized volume accumulator: dt * |cell| * w_k * (sum_d vol_d / dx_d + ns).
  void volume_integral(std::span<const double> q, const std::array<double, 3>& dx, double dt, std::span<double> acc);
  /// Unnormalized face accumulator: dt * |cell| * w_k * sum_d lift(faces) / dx_d.
  void face_integral(const std::array<std::span<const double>, 6>& faces, const std::array<double, 3>& dx, double dt,
                     std::span<double> acc);

  /// u* = u + M^{-1} (volume - faces), M = |cell| diag(w_k).
  void element_update(std::span<const double> u, std::span<const double> volume_acc, std::span<const double> face_acc,
                      const std::array<double, 3>& dx, std::span<double> out) const;

  /// Tensor-product quadrature weights of the spatial nodes.
  const std::vector<double>& node_weights() const { return node_weights_; }

 private:
  const PdeSystem& sys_;
  const BasisTables& tables_;
  ElementLayout layout_;
  BatchEvaluator eval_;
  std::vector<double> node_weights_;

  std::vector<double> f_, fbar_, grad_[3], ncp_, src_, ns_st_;
  std::vector<double> sl_, sr_, dq_, path_, pncp_, zeros_, g_lo_st_, g_up_st_;
  std::vector<double> lift_, acc_, vol_, ns_;
};

}  // namespace aderdg
