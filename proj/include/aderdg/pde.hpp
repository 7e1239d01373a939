#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace aderdg {

/// Strided view over a block of states. AoS blocks use point_stride = m,
/// var_stride = 1; SoA batches use point_stride = 1, var_stride = W.
template <typename T>
struct StatesView {
  T* data = nullptr;
  int count = 0;
  int point_stride = 0;
  int var_stride = 1;

  T& operator()(int p, int v) const { return data[p * point_stride + v * var_stride]; }

  operator StatesView<const T>() const
    requires(!std::is_const_v<T>)
  {
    return {data, count, point_stride, var_stride};
  }
};

using ConstStates = StatesView<const double>;
using MutableStates = StatesView<double>;

inline ConstStates aos_view(const double* data, int count, int m) { return {data, count, m, 1}; }
inline MutableStates aos_view(double* data, int count, int m) { return {data, count, m, 1}; }

class InadmissibleState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMaterial : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Up to three spatial gradient blocks, one per direction, each laid out like the states.
using GradientViews = std::array<ConstStates, 3>;

/// dQ/dt + div F(Q) + B(Q) grad Q = S(Q).
///
/// All block methods operate on `q.count` points and must produce, for each
/// point, the same floating-point result regardless of the layout strides.
class PdeSystem {
 public:
  PdeSystem(int num_vars, int dims) : m_(num_vars), d_(dims) {}
  virtual ~PdeSystem() = default;

  int num_vars() const { return m_; }
  int dims() const { return d_; }

  virtual std::string name() const = 0;
  virtual bool has_flux() const = 0;
  virtual bool has_ncp() const = 0;
  virtual bool has_source() const { return false; }
  virtual bool has_primitive_form() const { return false; }
  virtual std::vector<std::string> quantity_names() const = 0;
  /// Quantities [num_evolved(), m) are parameters that stay constant in time;
  /// the face dissipation leaves them alone.
  virtual int num_evolved() const { return m_; }

  /// Physical flux in coordinate direction `dir`.
  virtual void flux(ConstStates q, int dir, MutableStates f) const;
  /// B(Q) . grad Q with grad given per direction.
  virtual void ncp(ConstStates q, const GradientViews& grad, MutableStates out) const;
  virtual void source(ConstStates q, MutableStates s) const;
  /// Largest |eigenvalue| of A(Q) . e_dir, per point.
  virtual void max_wave_speed(ConstStates q, int dir, double* out) const = 0;
  /// Primitive quasi-linear operator A_V(V) . grad V (only if has_primitive_form()).
  virtual void primitive_quasilinear(ConstStates v, const GradientViews& grad, MutableStates out) const;

  /// Full spectrum of A(Q) . n for a unit vector n (length m output).
  virtual void eigenvalues(std::span<const double> q, std::span<const double> n, std::span<double> out) const = 0;
  /// Finite entries and system-specific positivity. Never throws.
  virtual bool admissible(std::span<const double> q) const;
  virtual void cons2prim(std::span<const double> q, std::span<double> v) const;
  virtual void prim2cons(std::span<const double> v, std::span<double> q) const;
  /// Mirror a state across a wall with normal along `dir`.
  virtual void reflect(std::span<double> q, int dir) const { (void)q; (void)dir; }

  // Point-wise conveniences on top of the block interface.
  void flux_normal(std::span<const double> q, std::span<const double> n, std::span<double> f) const;
  double max_abs_eigenvalue(std::span<const double> q, std::span<const double> n) const;

 protected:
  int m_;
  int d_;
};

/// q_t + a . grad q = 0.
class AdvectionSystem final : public PdeSystem {
 public:
  AdvectionSystem(int dims, std::array<double, 3> velocity);

  std::string name() const override { return "advection"; }
  bool has_flux() const override { return true; }
  bool has_ncp() const override { return false; }
  std::vector<std::string> quantity_names() const override { return {"q"}; }

  void flux(ConstStates q, int dir, MutableStates f) const override;
  void max_wave_speed(ConstStates q, int dir, double* out) const override;
  void eigenvalues(std::span<const double> q, std::span<const double> n, std::span<double> out) const override;

  const std::array<double, 3>& velocity() const { return a_; }

 private:
  std::array<double, 3> a_;
};

/// Compressible Euler equations with ideal-gas EOS; Q = (rho, rho v, rho E), m = d + 2.
class EulerSystem final : public PdeSystem {
 public:
  EulerSystem(int dims, double gamma = 1.4);

  std::string name() const override { return "euler"; }
  bool has_flux() const override { return true; }
  bool has_ncp() const override { return false; }
  bool has_primitive_form() const override { return true; }
  std::vector<std::string> quantity_names() const override;

  void flux(ConstStates q, int dir, MutableStates f) const override;
  void max_wave_speed(ConstStates q, int dir, double* out) const override;
  void primitive_quasilinear(ConstStates v, const GradientViews& grad, MutableStates out) const override;
  void eigenvalues(std::span<const double> q, std::span<const double> n, std::span<double> out) const override;
  bool admissible(std::span<const double> q) const override;
  void cons2prim(std::span<const double> q, std::span<double> v) const override;
  void prim2cons(std::span<const double> v, std::span<double> q) const override;
  void reflect(std::span<double> q, int dir) const override { q[1 + dir] = -q[1 + dir]; }

  double gamma() const { return gamma_; }
  double pressure(std::span<const double> q) const;

 private:
  double gamma_;
};

/// Checked point evaluation of the Euler flux; throws InadmissibleState.
std::vector<double> euler_flux(const EulerSystem& sys, std::span<const double> q, int dir);

/// Two-dimensional linear elasticity with a diffuse interface given by the
/// volume fraction alpha. The whole system is one non-conservative product.
/// Q = (sxx, syy, sxy, alpha*vx, alpha*vy, alpha, lambda, mu, rho).
class DiffuseElasticitySystem final : public PdeSystem {
 public:
  enum Index { kSxx = 0, kSyy, kSxy, kVx, kVy, kAlpha, kLambda, kMu, kRho, kNumVars };

  explicit DiffuseElasticitySystem(double alpha_min = 1e-3);

  std::string name() const override { return "elasticity-di"; }
  bool has_flux() const override { return false; }
  bool has_ncp() const override { return true; }
  std::vector<std::string> quantity_names() const override;
  int num_evolved() const override { return kAlpha; }

  void ncp(ConstStates q, const GradientViews& grad, MutableStates out) const override;
  void max_wave_speed(ConstStates q, int dir, double* out) const override;
  void eigenvalues(std::span<const double> q, std::span<const double> n, std::span<double> out) const override;
  void reflect(std::span<double> q, int dir) const override;

  double alpha_min() const { return alpha_min_; }
  /// C^1 floor of alpha: identity above 2*alpha_min, alpha_min at and below 0.
  double clamped_alpha(double alpha) const;

 private:
  double alpha_min_;
};

std::unique_ptr<PdeSystem> make_system(const std::string& name, int dims, double gamma,
                                       std::array<double, 3> advection_velocity, double alpha_min = 1e-3);

/// B(q).n as a dense m x m row-major matrix, assembled column by column from ncp().
std::vector<double> ncp_matrix(const PdeSystem& sys, std::span<const double> q, std::span<const double> n);

}  // namespace aderdg
