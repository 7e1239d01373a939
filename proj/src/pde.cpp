#include "aderdg/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aderdg {

namespace {

void fill_zero(MutableStates out, int m) {
  for (int p = 0; p < out.count; ++p)
    for (int v = 0; v < m; ++v) out(p, v) = 0.0;
}

}  // namespace

// ---------------------------------------------------------------- PdeSystem

void PdeSystem::flux(ConstStates, int, MutableStates f) const { fill_zero(f, m_); }

void PdeSystem::ncp(ConstStates, const GradientViews&, MutableStates out) const { fill_zero(out, m_); }

void PdeSystem::source(ConstStates, MutableStates s) const { fill_zero(s, m_); }

void PdeSystem::primitive_quasilinear(ConstStates, const GradientViews&, MutableStates) const {
  throw std::logic_error(name() + ": no primitive formulation");
}

bool PdeSystem::admissible(std::span<const double> q) const {
  return std::all_of(q.begin(), q.end(), [](double x) { return std::isfinite(x); });
}

void PdeSystem::cons2prim(std::span<const double> q, std::span<double> v) const { std::copy(q.begin(), q.end(), v.begin()); }

void PdeSystem::prim2cons(std::span<const double> v, std::span<double> q) const { std::copy(v.begin(), v.end(), q.begin()); }

void PdeSystem::flux_normal(std::span<const double> q, std::span<const double> n, std::span<double> f) const {
  std::vector<double> tmp(m_);
  std::fill(f.begin(), f.end(), 0.0);
  for (int d = 0; d < d_; ++d) {
    if (n[d] == 0.0) continue;
    flux(aos_view(q.data(), 1, m_), d, aos_view(tmp.data(), 1, m_));
    for (int v = 0; v < m_; ++v) f[v] += n[d] * tmp[v];
  }
}

double PdeSystem::max_abs_eigenvalue(std::span<const double> q, std::span<const double> n) const {
  std::vector<double> lam(m_);
  eigenvalues(q, n, lam);
  double s = 0.0;
  for (double l : lam) s = std::max(s, std::fabs(l));
  return s;
}

std::vector<double> ncp_matrix(const PdeSystem& sys, std::span<const double> q, std::span<const double> n) {
  const int m = sys.num_vars();
  std::vector<double> bn(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> grad(static_cast<std::size_t>(3) * m, 0.0);
  std::vector<double> col(m);
  for (int j = 0; j < m; ++j) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int d = 0; d < sys.dims(); ++d) grad[d * m + j] = n[d];
    const double* gp = grad.data();
    GradientViews g{aos_view(gp, 1, m), aos_view(gp + m, 1, m), aos_view(gp + 2 * m, 1, m)};
    sys.ncp(aos_view(q.data(), 1, m), g, aos_view(col.data(), 1, m));
    for (int i = 0; i < m; ++i) bn[i * m + j] = col[i];
  }
  return bn;
}

// ---------------------------------------------------------------- Advection

AdvectionSystem::AdvectionSystem(int dims, std::array<double, 3> velocity) : PdeSystem(1, dims), a_(velocity) {}

void AdvectionSystem::flux(ConstStates q, int dir, MutableStates f) const {
  const double a = a_[dir];
  for (int p = 0; p < q.count; ++p) f(p, 0) = a * q(p, 0);
}

void AdvectionSystem::max_wave_speed(ConstStates q, int dir, double* out) const {
  for (int p = 0; p < q.count; ++p) out[p] = std::fabs(a_[dir]);
}

void AdvectionSystem::eigenvalues(std::span<const double>, std::span<const double> n, std::span<double> out) const {
  double an = 0.0;
  for (int d = 0; d < d_; ++d) an += a_[d] * n[d];
  out[0] = an;
}

// ---------------------------------------------------------------- Euler

EulerSystem::EulerSystem(int dims, double gamma) : PdeSystem(dims + 2, dims), gamma_(gamma) {
  if (dims < 1 || dims > 3) throw std::invalid_argument("euler: dims must be 1..3");
  if (!(gamma > 1.0)) throw std::invalid_argument("euler: gamma must exceed 1");
}

std::vector<std::string> EulerSystem::quantity_names() const {
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> names{"rho"};
  for (int d = 0; d < d_; ++d) names.push_back(std::string("rho_v") + axes[d]);
  names.push_back("rho_E");
  return names;
}

double EulerSystem::pressure(std::span<const double> q) const {
  double ke = 0.0;
  for (int d = 0; d < d_; ++d) ke += q[1 + d] * q[1 + d];
  return (gamma_ - 1.0) * (q[d_ + 1] - 0.5 * ke / q[0]);
}

void EulerSystem::flux(ConstStates q, int dir, MutableStates f) const {
  const int e = d_ + 1;
  const double gm1 = gamma_ - 1.0;
  for (int p = 0; p < q.count; ++p) {
    const double rho = q(p, 0);
    double ke = 0.0;
    for (int d = 0; d < d_; ++d) ke += q(p, 1 + d) * q(p, 1 + d);
    const double pres = gm1 * (q(p, e) - 0.5 * ke / rho);
    const double vn = q(p, 1 + dir) / rho;
    f(p, 0) = q(p, 1 + dir);
    for (int d = 0; d < d_; ++d) f(p, 1 + d) = q(p, 1 + d) * vn;
    f(p, 1 + dir) += pres;
    f(p, e) = vn * (q(p, e) + pres);
  }
}

void EulerSystem::max_wave_speed(ConstStates q, int dir, double* out) const {
  const int e = d_ + 1;
  const double gm1 = gamma_ - 1.0;
  for (int p = 0; p < q.count; ++p) {
    const double rho = q(p, 0);
    double ke = 0.0;
    for (int d = 0; d < d_; ++d) ke += q(p, 1 + d) * q(p, 1 + d);
    const double pres = gm1 * (q(p, e) - 0.5 * ke / rho);
    const double c = std::sqrt(gamma_ * pres / rho);
    out[p] = std::fabs(q(p, 1 + dir) / rho) + c;
  }
}

void EulerSystem::primitive_quasilinear(ConstStates v, const GradientViews& grad, MutableStates out) const {
  const int e = d_ + 1;
  for (int p = 0; p < v.count; ++p) {
    const double rho = v(p, 0);
    const double pres = v(p, e);
    double mass = 0.0;
    double energy = 0.0;
    for (int d = 0; d < d_; ++d) {
      mass += v(p, 1 + d) * grad[d](p, 0) + rho * grad[d](p, 1 + d);
      energy += v(p, 1 + d) * grad[d](p, e) + gamma_ * pres * grad[d](p, 1 + d);
    }
    out(p, 0) = mass;
    out(p, e) = energy;
    for (int i = 0; i < d_; ++i) {
      double conv = 0.0;
      for (int d = 0; d < d_; ++d) conv += v(p, 1 + d) * grad[d](p, 1 + i);
      out(p, 1 + i) = conv + grad[i](p, e) / rho;
    }
  }
}

void EulerSystem::eigenvalues(std::span<const double> q, std::span<const double> n, std::span<double> out) const {
  if (!admissible(q)) throw InadmissibleState("euler: inadmissible state in eigenvalues");
  const double rho = q[0];
  double vn = 0.0;
  for (int d = 0; d < d_; ++d) vn += n[d] * q[1 + d] / rho;
  const double c = std::sqrt(gamma_ * pressure(q) / rho);
  out[0] = vn - c;
  for (int d = 0; d < d_; ++d) out[1 + d] = vn;
  out[d_ + 1] = vn + c;
}

bool EulerSystem::admissible(std::span<const double> q) const {
  if (!PdeSystem::admissible(q)) return false;
  if (!(q[0] > 0.0)) return false;
  return pressure(q) > 0.0;
}

void EulerSystem::cons2prim(std::span<const double> q, std::span<double> v) const {
  const double rho = q[0];
  v[0] = rho;
  for (int d = 0; d < d_; ++d) v[1 + d] = q[1 + d] / rho;
  v[d_ + 1] = pressure(q);
}

void EulerSystem::prim2cons(std::span<const double> v, std::span<double> q) const {
  const double rho = v[0];
  double ke = 0.0;
  for (int d = 0; d < d_; ++d) ke += v[1 + d] * v[1 + d];
  q[0] = rho;
  for (int d = 0; d < d_; ++d) q[1 + d] = rho * v[1 + d];
  q[d_ + 1] = v[d_ + 1] / (gamma_ - 1.0) + 0.5 * rho * ke;
}

std::vector<double> euler_flux(const EulerSystem& sys, std::span<const double> q, int dir) {
  if (!sys.admissible(q)) throw InadmissibleState("euler: inadmissible state in flux");
  std::vector<double> f(sys.num_vars());
  sys.flux(aos_view(q.data(), 1, sys.num_vars()), dir, aos_view(f.data(), 1, sys.num_vars()));
  return f;
}

// ---------------------------------------------------------------- Diffuse-interface elasticity

DiffuseElasticitySystem::DiffuseElasticitySystem(double alpha_min) : PdeSystem(kNumVars, 2), alpha_min_(alpha_min) {
  if (!(alpha_min > 0.0)) throw std::invalid_argument("elasticity: alpha_min must be positive");
}

std::vector<std::string> DiffuseElasticitySystem::quantity_names() const {
  return {"sxx", "syy", "sxy", "alpha_vx", "alpha_vy", "alpha", "lambda", "mu", "rho"};
}

double DiffuseElasticitySystem::clamped_alpha(double alpha) const {
  if (alpha >= 2.0 * alpha_min_) return alpha;
  if (alpha <= 0.0) return alpha_min_;
  return alpha_min_ + alpha * alpha / (4.0 * alpha_min_);
}

void DiffuseElasticitySystem::ncp(ConstStates q, const GradientViews& grad, MutableStates out) const {
  const ConstStates& gx = grad[0];
  const ConstStates& gy = grad[1];
  for (int p = 0; p < q.count; ++p) {
    const double alpha = q(p, kAlpha);
    const double lam = q(p, kLambda);
    const double mu = q(p, kMu);
    const double rho = q(p, kRho);
    const double inv = 1.0 / clamped_alpha(alpha);
    const double vx = q(p, kVx) * inv;
    const double vy = q(p, kVy) * inv;
    // Velocity gradient (1/alpha)(grad(alpha v) - v (x) grad alpha).
    const double gxx = inv * (gx(p, kVx) - vx * gx(p, kAlpha));
    const double gxy = inv * (gy(p, kVx) - vx * gy(p, kAlpha));
    const double gyx = inv * (gx(p, kVy) - vy * gx(p, kAlpha));
    const double gyy = inv * (gy(p, kVy) - vy * gy(p, kAlpha));
    const double lam2mu = lam + 2.0 * mu;
    out(p, kSxx) = -(lam2mu * gxx + lam * gyy);
    out(p, kSyy) = -(lam * gxx + lam2mu * gyy);
    out(p, kSxy) = -(mu * (gxy + gyx));
    const double sxx = q(p, kSxx);
    const double syy = q(p, kSyy);
    const double sxy = q(p, kSxy);
    const double div_x = gx(p, kSxx) + gy(p, kSxy);
    const double div_y = gx(p, kSxy) + gy(p, kSyy);
    const double jump_x = sxx * gx(p, kAlpha) + sxy * gy(p, kAlpha);
    const double jump_y = sxy * gx(p, kAlpha) + syy * gy(p, kAlpha);
    out(p, kVx) = -((alpha * div_x + jump_x) / rho);
    out(p, kVy) = -((alpha * div_y + jump_y) / rho);
    for (int v = kAlpha; v < kNumVars; ++v) out(p, v) = 0.0;
  }
}

void DiffuseElasticitySystem::max_wave_speed(ConstStates q, int, double* out) const {
  for (int p = 0; p < q.count; ++p) {
    const double rho = q(p, kRho);
    const double cp2 = (q(p, kLambda) + 2.0 * q(p, kMu)) / rho;
    out[p] = (rho > 0.0 && cp2 >= 0.0) ? std::sqrt(cp2) : std::numeric_limits<double>::quiet_NaN();
  }
}

void DiffuseElasticitySystem::eigenvalues(std::span<const double> q, std::span<const double>, std::span<double> out) const {
  const double rho = q[kRho];
  const double lam = q[kLambda];
  const double mu = q[kMu];
  if (!(rho > 0.0) || !(mu >= 0.0) || !(lam + 2.0 * mu > 0.0))
    throw DegenerateMaterial("elasticity: material parameters must satisfy rho > 0, mu >= 0, lambda + 2 mu > 0");
  const double cp = std::sqrt((lam + 2.0 * mu) / rho);
  const double cs = std::sqrt(mu / rho);
  std::fill(out.begin(), out.end(), 0.0);
  out[0] = -cp;
  out[1] = -cs;
  out[kNumVars - 2] = cs;
  out[kNumVars - 1] = cp;
}

void DiffuseElasticitySystem::reflect(std::span<double> q, int dir) const {
  q[dir == 0 ? kSxx : kSyy] = -q[dir == 0 ? kSxx : kSyy];
  q[kSxy] = -q[kSxy];
}

// ---------------------------------------------------------------- factory

std::unique_ptr<PdeSystem> make_system(const std::string& name, int dims, double gamma,
                                       std::array<double, 3> advection_velocity, double alpha_min) {
  if (name == "advection") return std::make_unique<AdvectionSystem>(dims, advection_velocity);
  if (name == "euler") return std::make_unique<EulerSystem>(dims, gamma);
  if (name == "elasticity-di") {
    if (dims != 2) throw std::invalid_argument("elasticity-di requires dim = 2");
    return std::make_unique<DiffuseElasticitySystem>(alpha_min);
  }
  throw std::invalid_argument("unknown system '" + name + "'");
}

}  // namespace aderdg
