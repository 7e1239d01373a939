#include "aderdg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aderdg {

void contract(const Matrix& a, std::span<const double> in, const TensorShape& in_shape, int dir, std::span<double> out) {
  const int n = in_shape.extent[dir];
  if (a.cols() != n) throw std::invalid_argument("contract: operator width does not match extent");
  const int rows = a.rows();
  const int inner = in_shape.inner(dir);
  const int outer = in_shape.outer(dir);
  const int half = n / 2;
  const bool odd = (n % 2) != 0;
  for (int o = 0; o < outer; ++o) {
    const double* src = in.data() + static_cast<std::size_t>(o) * n * inner;
    double* dst = out.data() + static_cast<std::size_t>(o) * rows * inner;
    for (int r = 0; r < rows; ++r) {
      double* y = dst + static_cast<std::size_t>(r) * inner;
      for (int i = 0; i < inner; ++i) y[i] = 0.0;
      for (int c = 0; c < half; ++c) {
        const double a0 = a(r, c);
        const double a1 = a(r, n - 1 - c);
        const double* x0 = src + static_cast<std::size_t>(c) * inner;
        const double* x1 = src + static_cast<std::size_t>(n - 1 - c) * inner;
        for (int i = 0; i < inner; ++i) y[i] += a0 * x0[i] + a1 * x1[i];
      }
      if (odd) {
        const double am = a(r, half);
        const double* xm = src + static_cast<std::size_t>(half) * inner;
        for (int i = 0; i < inner; ++i) y[i] += am * xm[i];
      }
    }
  }
}

void aos_to_soa(std::span<const double> aos, int width, int m, std::span<double> soa) {
  for (int p = 0; p < width; ++p)
    for (int v = 0; v < m; ++v) soa[v * width + p] = aos[p * m + v];
}

void soa_to_aos(std::span<const double> soa, int width, int m, std::span<double> aos) {
  for (int p = 0; p < width; ++p)
    for (int v = 0; v < m; ++v) aos[p * m + v] = soa[v * width + p];
}

BatchEvaluator::BatchEvaluator(const PdeSystem& system, int width, EvalMode mode)
    : sys_(system), width_(width), mode_(mode), m_(system.num_vars()) {
  if (width < 1) throw std::invalid_argument("batch width must be >= 1");
  q_soa_.resize(static_cast<std::size_t>(width) * m_);
  out_soa_.resize(static_cast<std::size_t>(width) * m_);
  for (auto& g : g_soa_) g.resize(static_cast<std::size_t>(width) * m_);
}

template <typename Kernel>
void BatchEvaluator::run_blocks(const double* q, std::array<const double*, 3> grad, int ngrad, int npts, double* out,
                                Kernel&& kernel) {
  const int m = m_;
  if (mode_ == EvalMode::kScalar) {
    for (int p = 0; p < npts; ++p) {
      GradientViews g{};
      for (int d = 0; d < ngrad; ++d) g[d] = aos_view(grad[d] + static_cast<std::size_t>(p) * m, 1, m);
      kernel(aos_view(q + static_cast<std::size_t>(p) * m, 1, m), g, aos_view(out + static_cast<std::size_t>(p) * m, 1, m));
    }
    return;
  }
  const int w = width_;
  for (int b = 0; b < npts; b += w) {
    const int lanes = std::min(w, npts - b);
    const std::size_t off = static_cast<std::size_t>(b) * m;
    aos_to_soa({q + off, static_cast<std::size_t>(lanes) * m}, lanes, m, q_soa_);
    GradientViews g{};
    for (int d = 0; d < ngrad; ++d) {
      aos_to_soa({grad[d] + off, static_cast<std::size_t>(lanes) * m}, lanes, m, g_soa_[d]);
      g[d] = ConstStates{g_soa_[d].data(), lanes, 1, lanes};
    }
    kernel(ConstStates{q_soa_.data(), lanes, 1, lanes}, g, MutableStates{out_soa_.data(), lanes, 1, lanes});
    soa_to_aos({out_soa_.data(), static_cast<std::size_t>(lanes) * m}, lanes, m, {out + off, static_cast<std::size_t>(lanes) * m});
  }
}

void BatchEvaluator::flux(const double* q, int npts, int dir, double* f) {
  run_blocks(q, {}, 0, npts, f, [&](ConstStates qs, const GradientViews&, MutableStates fs) { sys_.flux(qs, dir, fs); });
}

void BatchEvaluator::ncp(const double* q, std::array<const double*, 3> grad, int npts, double* out) {
  run_blocks(q, grad, sys_.dims(), npts, out,
             [&](ConstStates qs, const GradientViews& g, MutableStates os) { sys_.ncp(qs, g, os); });
}

void BatchEvaluator::source(const double* q, int npts, double* out) {
  run_blocks(q, {}, 0, npts, out, [&](ConstStates qs, const GradientViews&, MutableStates os) { sys_.source(qs, os); });
}

void BatchEvaluator::primitive_quasilinear(const double* v, std::array<const double*, 3> grad, int npts, double* out) {
  run_blocks(v, grad, sys_.dims(), npts, out,
             [&](ConstStates vs, const GradientViews& g, MutableStates os) { sys_.primitive_quasilinear(vs, g, os); });
}

void BatchEvaluator::max_wave_speed(const double* q, int npts, int dir, double* out) {
  const int m = m_;
  if (mode_ == EvalMode::kScalar) {
    for (int p = 0; p < npts; ++p) sys_.max_wave_speed(aos_view(q + static_cast<std::size_t>(p) * m, 1, m), dir, out + p);
    return;
  }
  for (int b = 0; b < npts; b += width_) {
    const int lanes = std::min(width_, npts - b);
    aos_to_soa({q + static_cast<std::size_t>(b) * m, static_cast<std::size_t>(lanes) * m}, lanes, m, q_soa_);
    sys_.max_wave_speed(ConstStates{q_soa_.data(), lanes, 1, lanes}, dir, out + b);
  }
}

bool BatchEvaluator::admissible(const double* q, int npts, std::span<unsigned char> flags) {
  bool all = true;
  for (int p = 0; p < npts; ++p) {
    bool ok = sys_.admissible({q + static_cast<std::size_t>(p) * m_, static_cast<std::size_t>(m_)});
    flags[p] = ok ? 1 : 0;
    all = all && ok;
  }
  return all;
}

bool BatchEvaluator::all_admissible(const double* q, int npts) {
  for (int p = 0; p < npts; ++p)
    if (!sys_.admissible({q + static_cast<std::size_t>(p) * m_, static_cast<std::size_t>(m_)})) return false;
  return true;
}

TduReport tdu(double wct_s, double elements_per_worker, long steps, int order, int dim) {
  if (!(wct_s >= 0.0) || !(elements_per_worker > 0.0) || steps <= 0 || order < 0 || dim < 1)
    throw std::invalid_argument("tdu: wall clock must be >= 0 and all counts positive");
  TduReport r;
  r.wct_s = wct_s;
  r.elements = elements_per_worker;
  r.steps = steps;
  r.order = order;
  r.dim = dim;
  const double dofs = std::pow(static_cast<double>(order + 1), dim);
  r.tdu_us = 1e6 * wct_s / (elements_per_worker * static_cast<double>(steps) * dofs);
  return r;
}

}  // namespace aderdg
