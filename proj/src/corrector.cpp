#include "aderdg/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aderdg {

bool max_speeds(const PdeSystem& sys, const double* q, int npts, std::array<double, 3>& lambda) {
  const int m = sys.num_vars();
  lambda = {0.0, 0.0, 0.0};
  bool any = false;
  for (int p = 0; p < npts; ++p) {
    std::array<double, 3> s{0.0, 0.0, 0.0};
    bool finite = true;
    for (int d = 0; d < sys.dims(); ++d) {
      sys.max_wave_speed(aos_view(q + static_cast<std::size_t>(p) * m, 1, m), d, &s[d]);
      finite = finite && std::isfinite(s[d]);
    }
    if (!finite) continue;
    any = true;
    for (int d = 0; d < sys.dims(); ++d) lambda[d] = std::max(lambda[d], s[d]);
  }
  return any;
}

double cfl_timestep(const std::array<double, 3>& lambda, const std::array<double, 3>& dx, int dims, double cfl) {
  double sum = 0.0;
  for (int d = 0; d < dims; ++d) sum += std::abs(lambda[d]) / dx[d];
  if (sum <= 0.0) return std::numeric_limits<double>::infinity();
  return cfl / sum;
}

double compute_timestep(const CartesianMesh& mesh, const PdeSystem& sys, int order, double cfl, std::span<const double> u) {
  if (mesh.num_cells() <= 0) throw std::invalid_argument("compute_timestep: empty domain");
  const ElementLayout l(order, sys.dims(), sys.num_vars());
  const std::size_t block = static_cast<std::size_t>(l.nsp) * l.m;
  double dt = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int e = 0; e < mesh.num_cells(); ++e) {
    std::array<double, 3> lambda{};
    if (!max_speeds(sys, u.data() + e * block, l.nsp, lambda)) continue;
    any = true;
    dt = std::min(dt, cfl_timestep(lambda, mesh.dx, sys.dims(), cfl));
  }
  if (!any) throw std::runtime_error("compute_timestep: no cell has an admissible state");
  return dt;
}

double rusanov_theta(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                     std::span<const double> n) {
  return std::max(sys.max_abs_eigenvalue(qm, n), sys.max_abs_eigenvalue(qp, n));
}

std::vector<double> path_integral_B(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                                    std::span<const double> n) {
  const int m = sys.num_vars();
  std::vector<double> out(static_cast<std::size_t>(m) * m, 0.0);
  if (!sys.has_ncp()) return out;
  std::vector<double> psi(m);
  for (int g = 0; g < 3; ++g) {
    for (int v = 0; v < m; ++v) psi[v] = qm[v] + kPathNodes[g] * (qp[v] - qm[v]);
    auto b = ncp_matrix(sys, psi, n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += kPathWeights[g] * b[i];
  }
  return out;
}

std::vector<double> riemann_Dminus(const PdeSystem& sys, std::span<const double> qm, std::span<const double> qp,
                                   std::span<const double> n) {
  const int m = sys.num_vars();
  std::vector<double> fm(m), fp(m), out(m);
  sys.flux_normal(qm, n, fm);
  sys.flux_normal(qp, n, fp);
  const double s = rusanov_theta(sys, qm, qp, n);
  auto b = path_integral_B(sys, qm, qp, n);
  for (int r = 0; r < m; ++r) {
    double bj = 0.0;
    for (int c = 0; c < m; ++c) bj += b[static_cast<std::size_t>(r) * m + c] * (qp[c] - qm[c]);
    const double diss = r < sys.num_evolved() ? s * (qp[r] - qm[r]) : 0.0;
    out[r] = 0.5 * (fm[r] + fp[r]) + 0.5 * (bj - diss);
  }
  return out;
}

Corrector::Corrector(const PdeSystem& system, const BasisTables& tables, int batch_width, EvalMode mode)
    : sys_(system), tables_(tables), layout_(tables.order, system.dims(), system.num_vars()), eval_(system, batch_width, mode) {
  const ElementLayout& l = layout_;
  const std::size_t st = static_cast<std::size_t>(l.nst) * l.m;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  for (auto* b : {&f_, &fbar_, &ncp_, &src_, &ns_st_, &grad_[0], &grad_[1], &grad_[2]}) b->resize(st);
  for (auto* b : {&dq_, &path_, &pncp_, &zeros_, &g_lo_st_, &g_up_st_}) b->resize(st);
  sl_.resize(l.nst);
  sr_.resize(l.nst);
  lift_.resize(2 * sp);
  acc_.resize(sp);
  vol_.resize(3 * sp);
  ns_.resize(sp);
  node_weights_.resize(l.nsp);
  for (int p = 0; p < l.nsp; ++p) {
    double w = 1.0;
    int rest = p;
    for (int d = 0; d < l.dims; ++d) {
      w *= tables_.weights[rest % l.n1];
      rest /= l.n1;
    }
    node_weights_[p] = w;
  }
}

bool Corrector::volume_terms(std::span<const double> q, const std::array<double, 3>& dx, std::span<double> vol,
                             std::span<double> ns) {
  const ElementLayout& l = layout_;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  const std::size_t st = static_cast<std::size_t>(l.nst) * l.m;
  for (int d = 0; d < l.dims; ++d) {
    std::span<double> vd = vol.subspan(d * sp, sp);
    if (!sys_.has_flux()) {
      std::fill(vd.begin(), vd.end(), 0.0);
      continue;
    }
    eval_.flux(q.data(), l.nst, d, f_.data());
    contract(tables_.weight_row, f_, l.space_time, l.dims, fbar_);
    contract(tables_.volume_stiffness, fbar_, l.spatial, d, vd);
  }
  const bool has_ns = sys_.has_ncp() || sys_.has_source();
  if (!has_ns) return false;
  std::fill(ns_st_.begin(), ns_st_.end(), 0.0);
  if (sys_.has_ncp()) {
    for (int d = 0; d < l.dims; ++d) {
      contract(tables_.derivative, q, l.space_time, d, grad_[d]);
      const double inv = 1.0 / dx[d];
      for (std::size_t i = 0; i < st; ++i) grad_[d][i] *= inv;
    }
    eval_.ncp(q.data(), {grad_[0].data(), grad_[1].data(), grad_[2].data()}, l.nst, ncp_.data());
    for (std::size_t i = 0; i < st; ++i) ns_st_[i] -= ncp_[i];
  }
  if (sys_.has_source()) {
    eval_.source(q.data(), l.nst, src_.data());
    for (std::size_t i = 0; i < st; ++i) ns_st_[i] += src_[i];
  }
  contract(tables_.weight_row, ns_st_, l.space_time, l.dims, ns);
  return true;
}

void Corrector::face_flux_points(int dir, int npts, const double* qL, const double* FL, const double* qR, const double* FR,
                                 double* g_lower, double* g_upper) {
  const int m = layout_.m;
  const std::size_t n = static_cast<std::size_t>(npts) * m;
  if (static_cast<std::size_t>(npts) > sl_.size()) {
    sl_.resize(npts);
    sr_.resize(npts);
  }
  if (n > dq_.size()) {
    for (auto* b : {&dq_, &path_, &pncp_, &zeros_}) b->resize(n);
  }
  eval_.max_wave_speed(qL, npts, dir, sl_.data());
  eval_.max_wave_speed(qR, npts, dir, sr_.data());
  for (std::size_t i = 0; i < n; ++i) dq_[i] = qR[i] - qL[i];

  const bool ncp = sys_.has_ncp();
  if (ncp) {
    std::fill(zeros_.begin(), zeros_.begin() + n, 0.0);
    std::array<const double*, 3> g{zeros_.data(), zeros_.data(), zeros_.data()};
    g[dir] = dq_.data();
    // Accumulate the outer nodes first so the sum is symmetric in s -> 1 - s.
    for (std::size_t i = 0; i < n; ++i) g_upper[i] = 0.0;
    for (int k : {0, 2, 1}) {
      for (std::size_t i = 0; i < n; ++i) path_[i] = qL[i] + kPathNodes[k] * dq_[i];
      eval_.ncp(path_.data(), g, npts, pncp_.data());
      for (std::size_t i = 0; i < n; ++i) g_upper[i] += kPathWeights[k] * pncp_[i];
    }
  }
  const int evolved = sys_.num_evolved();
  for (int p = 0; p < npts; ++p) {
    const double a = sl_[p];
    const double b = sr_[p];
    const double s = (std::isnan(a) || std::isnan(b)) ? std::numeric_limits<double>::quiet_NaN() : std::max(a, b);
    for (int v = 0; v < m; ++v) {
      const std::size_t i = static_cast<std::size_t>(p) * m + v;
      const double fc = 0.5 * (FL[i] + FR[i]) - (v < evolved ? 0.5 * s * dq_[i] : 0.0);
      if (ncp) {
        const double fl = 0.5 * g_upper[i];
        g_lower[i] = fc + fl;
        g_upper[i] = fl - fc;
      } else {
        g_lower[i] = fc;
        g_upper[i] = -fc;
      }
    }
  }
}

void Corrector::face_flux(int dir, std::span<const double> qL, std::span<const double> FL, std::span<const double> qR,
                          std::span<const double> FR, std::span<double> g_lower, std::span<double> g_upper) {
  const ElementLayout& l = layout_;
  face_flux_points(dir, l.nface_st, qL.data(), FL.data(), qR.data(), FR.data(), g_lo_st_.data(), g_up_st_.data());
  const TensorShape shape = l.space_time.with_extent(dir, 1);
  contract(tables_.weight_row, g_lo_st_, shape, l.dims, g_lower);
  contract(tables_.weight_row, g_up_st_, shape, l.dims, g_upper);
}

void Corrector::update(std::span<const double> u, std::span<const double> vol, std::span<const double> ns, bool has_ns,
                       const std::array<std::span<const double>, 6>& faces, const std::array<double, 3>& dx, double dt,
                       std::span<double> out) {
  const ElementLayout& l = layout_;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  std::span<double> lo{lift_.data(), sp};
  std::span<double> hi{lift_.data() + sp, sp};
  for (int d = 0; d < l.dims; ++d) {
    const TensorShape fshape = l.spatial.with_extent(d, 1);
    contract(tables_.left_lift, faces[2 * d], fshape, d, lo);
    contract(tables_.right_lift, faces[2 * d + 1], fshape, d, hi);
    const double inv = 1.0 / dx[d];
    const double* vd = vol.data() + d * sp;
    for (std::size_t i = 0; i < sp; ++i) {
      const double c = (vd[i] - (lo[i] + hi[i])) * inv;
      acc_[i] = d == 0 ? c : acc_[i] + c;
    }
  }
  if (has_ns) {
    for (std::size_t i = 0; i < sp; ++i) out[i] = u[i] + dt * (acc_[i] + ns[i]);
  } else {
    for (std::size_t i = 0; i < sp; ++i) out[i] = u[i] + dt * acc_[i];
  }
}

void Corrector::volume_integral(std::span<const double> q, const std::array<double, 3>& dx, double dt,
                                std::span<double> acc) {
  const ElementLayout& l = layout_;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  const bool has_ns = volume_terms(q, dx, vol_, ns_);
  double cell = 1.0;
  for (int d = 0; d < l.dims; ++d) cell *= dx[d];
  for (std::size_t i = 0; i < sp; ++i) {
    double r = 0.0;
    for (int d = 0; d < l.dims; ++d) r += vol_[d * sp + i] / dx[d];
    if (has_ns) r += ns_[i];
    acc[i] = dt * cell * node_weights_[i / l.m] * r;
  }
}

void Corrector::face_integral(const std::array<std::span<const double>, 6>& faces, const std::array<double, 3>& dx,
                              double dt, std::span<double> acc) {
  const ElementLayout& l = layout_;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  std::span<double> lo{lift_.data(), sp};
  std::span<double> hi{lift_.data() + sp, sp};
  double cell = 1.0;
  for (int d = 0; d < l.dims; ++d) cell *= dx[d];
  std::fill(acc.begin(), acc.begin() + sp, 0.0);
  for (int d = 0; d < l.dims; ++d) {
    const TensorShape fshape = l.spatial.with_extent(d, 1);
    contract(tables_.left_lift, faces[2 * d], fshape, d, lo);
    contract(tables_.right_lift, faces[2 * d + 1], fshape, d, hi);
    for (std::size_t i = 0; i < sp; ++i) acc[i] += dt * cell * node_weights_[i / l.m] * (lo[i] + hi[i]) / dx[d];
  }
}

void Corrector::element_update(std::span<const double> u, std::span<const double> volume_acc,
                               std::span<const double> face_acc, const std::array<double, 3>& dx,
                               std::span<double> out) const {
  const ElementLayout& l = layout_;
  const std::size_t sp = static_cast<std::size_t>(l.nsp) * l.m;
  double cell = 1.0;
  for (int d = 0; d < l.dims; ++d) cell *= dx[d];
  for (std::size_t i = 0; i < sp; ++i) out[i] = u[i] + (volume_acc[i] - face_acc[i]) / (cell * node_weights_[i / l.m]);
}

}  // namespace aderdg
