#include "aderdg/limiter.hpp"

#include <algorithm>
#include <cmath>

namespace aderdg {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

// ---------------------------------------------------------------- projection / recovery

SubcellTransform::SubcellTransform(const BasisTables& tables, int dims, int m)
    : tables_(tables), layout_(tables.order, dims, m) {
  const std::size_t n = static_cast<std::size_t>(layout_.nsub) * m;
  a_.resize(n);
  b_.resize(n);
}

void SubcellTransform::apply(const Matrix& op, std::span<const double> in, std::span<double> out, int from_extent,
                             int to_extent) {
  TensorShape shape;
  shape.m = layout_.m;
  shape.ndims = layout_.dims;
  for (int d = 0; d < layout_.dims; ++d) shape.extent[d] = from_extent;
  std::span<const double> cur = in;
  for (int d = 0; d < layout_.dims; ++d) {
    const TensorShape next = shape.with_extent(d, to_extent);
    std::vector<double>& dst = (d % 2 == 0) ? a_ : b_;
    contract(op, cur, shape, d, dst);
    cur = {dst.data(), static_cast<std::size_t>(next.size())};
    shape = next;
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

void SubcellTransform::project(std::span<const double> u, std::span<double> sub) {
  apply(tables_.subcell_projection, u, sub, layout_.n1, layout_.ns);
}

void SubcellTransform::recover(std::span<const double> sub, std::span<double> u) {
  apply(tables_.subcell_recovery, sub, u, layout_.ns, layout_.n1);
}

// ---------------------------------------------------------------- detection

void merge_bounds(std::span<const double> sub, int m, std::span<double> lo, std::span<double> hi) {
  const std::size_t n = sub.size() / m;
  for (std::size_t p = 0; p < n; ++p)
    for (int v = 0; v < m; ++v) {
      const double x = sub[p * m + v];
      lo[v] = std::min(lo[v], x);
      hi[v] = std::max(hi[v], x);
    }
}

bool dmp_violated(std::span<const double> candidate, int m, std::span<const double> lo, std::span<const double> hi,
                  const DmpOptions& options) {
  const std::size_t n = candidate.size() / m;
  for (int v = 0; v < m; ++v) {
    const double delta = std::max(options.delta0, options.epsilon * (hi[v] - lo[v]));
    const double a = lo[v] - delta;
    const double b = hi[v] + delta;
    for (std::size_t p = 0; p < n; ++p) {
      const double x = candidate[p * m + v];
      if (!(x >= a && x <= b)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- MUSCL-Hancock

SubcellSolver::SubcellSolver(const PdeSystem& system, const BasisTables& tables, bool primitive, int batch_width,
                             EvalMode mode)
    : sys_(system),
      tables_(tables),
      layout_(tables.order, system.dims(), system.num_vars()),
      primitive_(primitive && system.has_primitive_form()),
      pext_(layout_.ns + 4),
      faces_(system, tables, batch_width, mode),
      eval_(system, batch_width, mode) {
  npatch_ = 1;
  for (int d = 0; d < layout_.dims; ++d) npatch_ *= pext_;
  const int m = layout_.m;
  const std::size_t n = static_cast<std::size_t>(npatch_) * m;
  w_.resize(n);
  qt_.resize(n);
  for (int d = 0; d < 3; ++d) {
    slope_[d].assign(n, 0.0);
    lo_[d].resize(n);
    hi_[d].resize(n);
    grad_pt_[d].assign(m, 0.0);
  }
  first_.resize(npatch_);
  for (auto* b : {&pt_, &pt2_, &pt3_, &fl_, &fr_, &l_}) b->resize(m);
  const std::size_t nf = static_cast<std::size_t>(layout_.ns + 1) * layout_.nsubface * m;
  for (auto* b : {&fqL_, &fqR_, &fFL_, &fFR_}) b->resize(nf);
  for (int d = 0; d < 3; ++d) {
    fgl_[d].resize(nf);
    fgu_[d].resize(nf);
  }
}

bool SubcellSolver::step(std::span<const double> patch, const std::array<double, 3>& dxs, double dt,
                         std::span<double> out, std::span<double> face_flux, bool first_order) {
  const int m = layout_.m;
  const int D = layout_.dims;
  const int P = pext_;
  const int ns = layout_.ns;
  std::array<int, 3> ext{1, 1, 1};
  std::array<int, 3> stride{1, 1, 1};
  for (int d = 0; d < D; ++d) ext[d] = P;
  stride[1] = P;
  stride[2] = P * P;
  fallbacks_ = 0;

  for (int p = 0; p < npatch_; ++p) {
    std::span<const double> src = patch.subspan(static_cast<std::size_t>(p) * m, m);
    std::span<double> dst{w_.data() + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)};
    if (primitive_)
      sys_.cons2prim(src, dst);
    else
      std::copy(src.begin(), src.end(), dst.begin());
  }

  auto point = [m](std::vector<double>& v, int p) { return v.data() + static_cast<std::size_t>(p) * m; };
  auto cpoint = [m](const std::vector<double>& v, int p) { return v.data() + static_cast<std::size_t>(p) * m; };

  // Reconstruction and half-step evolution on the core plus one halo layer.
  std::array<int, 3> i{0, 0, 0};
  for (i[2] = 0; i[2] < ext[2]; ++i[2])
    for (i[1] = 0; i[1] < ext[1]; ++i[1])
      for (i[0] = 0; i[0] < ext[0]; ++i[0]) {
        bool inside = true;
        for (int d = 0; d < D; ++d) inside = inside && i[d] >= 1 && i[d] <= P - 2;
        if (!inside) continue;
        const int p = pidx(i);
        const double* w = cpoint(w_, p);
        for (int d = 0; d < D; ++d) {
          double* s = point(slope_[d], p);
          for (int v = 0; v < m; ++v)
            s[v] = first_order ? 0.0 : minmod(w[v] - cpoint(w_, p - stride[d])[v], cpoint(w_, p + stride[d])[v] - w[v]);
        }

        bool ok = true;
        if (!first_order) {
          // Hancock half step: W~ = W + dt/2 L(W).
          std::fill(l_.begin(), l_.end(), 0.0);
          for (int d = 0; d < D; ++d) {
            const double* s = cpoint(slope_[d], p);
            for (int v = 0; v < m; ++v) grad_pt_[d][v] = s[v] / dxs[d];
          }
          GradientViews g{};
          for (int d = 0; d < D; ++d) g[d] = aos_view(grad_pt_[d].data(), 1, m);
          if (primitive_) {
            sys_.primitive_quasilinear(aos_view(w, 1, m), g, aos_view(pt_.data(), 1, m));
            for (int v = 0; v < m; ++v) l_[v] -= pt_[v];
          } else {
            if (sys_.has_flux()) {
              for (int d = 0; d < D; ++d) {
                const double* s = cpoint(slope_[d], p);
                for (int v = 0; v < m; ++v) {
                  pt_[v] = w[v] + 0.5 * s[v];
                  pt2_[v] = w[v] - 0.5 * s[v];
                }
                sys_.flux(aos_view(pt_.data(), 1, m), d, aos_view(fr_.data(), 1, m));
                sys_.flux(aos_view(pt2_.data(), 1, m), d, aos_view(fl_.data(), 1, m));
                for (int v = 0; v < m; ++v) l_[v] -= (fr_[v] - fl_[v]) / dxs[d];
              }
            }
            if (sys_.has_ncp()) {
              sys_.ncp(aos_view(w, 1, m), g, aos_view(pt_.data(), 1, m));
              for (int v = 0; v < m; ++v) l_[v] -= pt_[v];
            }
            if (sys_.has_source()) {
              sys_.source(aos_view(w, 1, m), aos_view(pt_.data(), 1, m));
              for (int v = 0; v < m; ++v) l_[v] += pt_[v];
            }
          }
          double* qt = point(qt_, p);
          for (int v = 0; v < m; ++v) pt3_[v] = w[v] + 0.5 * dt * l_[v];
          if (primitive_) {
            sys_.prim2cons(pt3_, {qt, static_cast<std::size_t>(m)});
          } else {
            std::copy(pt3_.begin(), pt3_.end(), qt);
          }
          ok = sys_.admissible({qt, static_cast<std::size_t>(m)});
          for (int d = 0; d < D && ok; ++d) {
            const double* s = cpoint(slope_[d], p);
            for (int v = 0; v < m; ++v) {
              pt_[v] = pt3_[v] + 0.5 * s[v];
              pt2_[v] = pt3_[v] - 0.5 * s[v];
            }
            double* h = point(hi_[d], p);
            double* lo = point(lo_[d], p);
            if (primitive_) {
              sys_.prim2cons(pt_, {h, static_cast<std::size_t>(m)});
              sys_.prim2cons(pt2_, {lo, static_cast<std::size_t>(m)});
            } else {
              std::copy(pt_.begin(), pt_.end(), h);
              std::copy(pt2_.begin(), pt2_.end(), lo);
            }
            ok = sys_.admissible({h, static_cast<std::size_t>(m)}) && sys_.admissible({lo, static_cast<std::size_t>(m)});
          }
        }
        first_[p] = (first_order || !ok) ? 1 : 0;
        if (first_[p]) {
          if (!first_order) ++fallbacks_;
          const double* q = patch.data() + static_cast<std::size_t>(p) * m;
          std::copy(q, q + m, point(qt_, p));
          for (int d = 0; d < D; ++d) {
            std::copy(q, q + m, point(hi_[d], p));
            std::copy(q, q + m, point(lo_[d], p));
            std::fill(point(slope_[d], p), point(slope_[d], p) + m, 0.0);
          }
        }
      }

  // Subface fluxes of the core, per direction.
  for (int d = 0; d < D; ++d) {
    std::array<int, 3> fe{1, 1, 1};
    for (int e = 0; e < D; ++e) fe[e] = e == d ? ns + 1 : ns;
    int nf = 0;
    std::array<int, 3> f{0, 0, 0};
    for (f[2] = 0; f[2] < fe[2]; ++f[2])
      for (f[1] = 0; f[1] < fe[1]; ++f[1])
        for (f[0] = 0; f[0] < fe[0]; ++f[0]) {
          std::array<int, 3> r{0, 0, 0};
          for (int e = 0; e < D; ++e) r[e] = f[e] + 2;
          const int pr = pidx(r);
          const int pl = pr - stride[d];
          std::copy(cpoint(hi_[d], pl), cpoint(hi_[d], pl) + m, fqL_.data() + static_cast<std::size_t>(nf) * m);
          std::copy(cpoint(lo_[d], pr), cpoint(lo_[d], pr) + m, fqR_.data() + static_cast<std::size_t>(nf) * m);
          ++nf;
        }
    if (sys_.has_flux()) {
      eval_.flux(fqL_.data(), nf, d, fFL_.data());
      eval_.flux(fqR_.data(), nf, d, fFR_.data());
    } else {
      std::fill(fFL_.begin(), fFL_.end(), 0.0);
      std::fill(fFR_.begin(), fFR_.end(), 0.0);
    }
    faces_.face_flux_points(d, nf, fqL_.data(), fFL_.data(), fqR_.data(), fFR_.data(), fgl_[d].data(), fgu_[d].data());
  }

  auto face_id = [&](int d, const std::array<int, 3>& s, int fd) {
    std::array<int, 3> f = s;
    f[d] = fd;
    int id = 0, mult = 1;
    for (int e = 0; e < D; ++e) {
      id += f[e] * mult;
      mult *= e == d ? ns + 1 : ns;
    }
    return id;
  };

  // Core update.
  const bool ns_terms = !primitive_ && (sys_.has_ncp() || sys_.has_source());
  bool all_ok = true;
  std::array<int, 3> s{0, 0, 0};
  std::array<int, 3> se{1, 1, 1};
  for (int d = 0; d < D; ++d) se[d] = ns;
  for (s[2] = 0; s[2] < se[2]; ++s[2])
    for (s[1] = 0; s[1] < se[1]; ++s[1])
      for (s[0] = 0; s[0] < se[0]; ++s[0]) {
        std::array<int, 3> pi{0, 0, 0};
        for (int d = 0; d < D; ++d) pi[d] = s[d] + 2;
        const int p = pidx(pi);
        for (int v = 0; v < m; ++v) l_[v] = 0.0;
        for (int d = 0; d < D; ++d) {
          const double* gl = fgl_[d].data() + static_cast<std::size_t>(face_id(d, s, s[d] + 1)) * m;
          const double* gu = fgu_[d].data() + static_cast<std::size_t>(face_id(d, s, s[d])) * m;
          const double inv = 1.0 / dxs[d];
          for (int v = 0; v < m; ++v) {
            const double c = -(gl[v] + gu[v]) * inv;
            l_[v] = d == 0 ? c : l_[v] + c;
          }
        }
        if (ns_terms) {
          std::fill(pt3_.begin(), pt3_.end(), 0.0);
          const double* qt = cpoint(qt_, p);
          if (sys_.has_ncp()) {
            GradientViews g{};
            for (int d = 0; d < D; ++d) {
              const double* sl = cpoint(slope_[d], p);
              for (int v = 0; v < m; ++v) grad_pt_[d][v] = sl[v] / dxs[d];
              g[d] = aos_view(grad_pt_[d].data(), 1, m);
            }
            sys_.ncp(aos_view(qt, 1, m), g, aos_view(pt_.data(), 1, m));
            for (int v = 0; v < m; ++v) pt3_[v] -= pt_[v];
          }
          if (sys_.has_source()) {
            sys_.source(aos_view(qt, 1, m), aos_view(pt_.data(), 1, m));
            for (int v = 0; v < m; ++v) pt3_[v] += pt_[v];
          }
          for (int v = 0; v < m; ++v) l_[v] += pt3_[v];
        }
        const int o = s[0] + ns * (s[1] + ns * s[2]);
        double* dst = out.data() + static_cast<std::size_t>(o) * m;
        const double* q = patch.data() + static_cast<std::size_t>(p) * m;
        for (int v = 0; v < m; ++v) dst[v] = q[v] + dt * l_[v];
        all_ok = all_ok && sys_.admissible({dst, static_cast<std::size_t>(m)});
      }

  // Element-boundary subface contributions.
  const int nsf = layout_.nsubface;
  for (int d = 0; d < D; ++d) {
    for (int side = 0; side < 2; ++side) {
      const int fidx = 2 * d + side;
      double* gl_out = face_flux.data() + static_cast<std::size_t>(2 * fidx) * nsf * m;
      double* gu_out = face_flux.data() + static_cast<std::size_t>(2 * fidx + 1) * nsf * m;
      std::array<int, 3> fs{0, 0, 0};
      std::array<int, 3> fse{1, 1, 1};
      for (int e = 0; e < D; ++e) fse[e] = e == d ? 1 : ns;
      int k = 0;
      for (fs[2] = 0; fs[2] < fse[2]; ++fs[2])
        for (fs[1] = 0; fs[1] < fse[1]; ++fs[1])
          for (fs[0] = 0; fs[0] < fse[0]; ++fs[0]) {
            const int id = face_id(d, fs, side == 0 ? 0 : ns);
            std::copy(fgl_[d].data() + static_cast<std::size_t>(id) * m, fgl_[d].data() + static_cast<std::size_t>(id + 1) * m,
                      gl_out + static_cast<std::size_t>(k) * m);
            std::copy(fgu_[d].data() + static_cast<std::size_t>(id) * m, fgu_[d].data() + static_cast<std::size_t>(id + 1) * m,
                      gu_out + static_cast<std::size_t>(k) * m);
            ++k;
          }
    }
  }
  return all_ok;
}

}  // namespace aderdg
