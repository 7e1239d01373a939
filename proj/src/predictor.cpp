#include "aderdg/predictor.hpp"

#include <algorithm>
#include <cmath>

namespace aderdg {

namespace {

double rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

Predictor::Predictor(const PdeSystem& system, const BasisTables& tables, int batch_width, EvalMode mode)
    : sys_(system), tables_(tables), layout_(tables.order, system.dims(), system.num_vars()), eval_(system, batch_width, mode) {
  const std::size_t st = static_cast<std::size_t>(layout_.nst) * layout_.m;
  for (auto* buf : {&flux_, &dflux_, &ncp_, &src_, &r_, &pr_, &qnew_, &k1_, &k2_, &tmp_, &prim_u_}) buf->resize(st);
  for (auto& g : grad_) g.resize(st);
  point_.resize(layout_.m);
}

void Predictor::rhs(std::span<const double> q, const TensorShape& shape, const std::array<double, 3>& dx, bool primitive,
                    std::span<double> r) {
  const int npts = shape.points();
  const std::size_t n = static_cast<std::size_t>(npts) * layout_.m;
  const int dims = layout_.dims;
  std::fill(r.begin(), r.begin() + n, 0.0);

  auto gradients = [&]() {
    for (int d = 0; d < dims; ++d) {
      contract(tables_.derivative, q, shape, d, grad_[d]);
      const double inv = 1.0 / dx[d];
      for (std::size_t i = 0; i < n; ++i) grad_[d][i] *= inv;
    }
  };
  std::array<const double*, 3> g{grad_[0].data(), grad_[1].data(), grad_[2].data()};

  if (primitive) {
    gradients();
    eval_.primitive_quasilinear(q.data(), g, npts, ncp_.data());
    for (std::size_t i = 0; i < n; ++i) r[i] -= ncp_[i];
    return;
  }
  if (sys_.has_flux()) {
    for (int d = 0; d < dims; ++d) {
      eval_.flux(q.data(), npts, d, flux_.data());
      contract(tables_.derivative, flux_, shape, d, dflux_);
      const double inv = 1.0 / dx[d];
      for (std::size_t i = 0; i < n; ++i) r[i] -= dflux_[i] * inv;
    }
  }
  if (sys_.has_ncp()) {
    gradients();
    eval_.ncp(q.data(), g, npts, ncp_.data());
    for (std::size_t i = 0; i < n; ++i) r[i] -= ncp_[i];
  }
  if (sys_.has_source()) {
    eval_.source(q.data(), npts, src_.data());
    for (std::size_t i = 0; i < n; ++i) r[i] += src_[i];
  }
}

void Predictor::operator_L(std::span<const double> u, const std::array<double, 3>& dx, std::span<double> out) {
  rhs(u, layout_.spatial, dx, false, out);
}

bool Predictor::state_ok(std::span<const double> w, int npts, bool primitive) {
  const int m = layout_.m;
  for (int p = 0; p < npts; ++p) {
    std::span<const double> s{w.data() + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)};
    if (primitive) {
      sys_.prim2cons(s, point_);
      if (!sys_.admissible(point_)) return false;
    } else if (!sys_.admissible(s)) {
      return false;
    }
  }
  return true;
}

void Predictor::guess_muscl_impl(std::span<const double> u, const std::array<double, 3>& dx, double dt, bool primitive,
                                 std::span<double> q) {
  const std::size_t nsp = static_cast<std::size_t>(layout_.nsp) * layout_.m;
  rhs(u, layout_.spatial, dx, primitive, k1_);
  for (int t = 0; t < layout_.n1; ++t) {
    const double tau = tables_.nodes[t] * dt;
    double* dst = q.data() + t * nsp;
    for (std::size_t i = 0; i < nsp; ++i) dst[i] = u[i] + tau * k1_[i];
  }
}

bool Predictor::guess_order3_impl(std::span<const double> u, const std::array<double, 3>& dx, double dt, bool primitive,
                                  std::span<double> q) {
  const std::size_t nsp = static_cast<std::size_t>(layout_.nsp) * layout_.m;
  rhs(u, layout_.spatial, dx, primitive, k1_);
  for (std::size_t i = 0; i < nsp; ++i) tmp_[i] = u[i] + dt * k1_[i];
  if (!state_ok(tmp_, layout_.nsp, primitive)) {
    guess_muscl_impl(u, dx, dt, primitive, q);
    return false;
  }
  rhs(tmp_, layout_.spatial, dx, primitive, k2_);
  for (int t = 0; t < layout_.n1; ++t) {
    const double tau = tables_.nodes[t] * dt;
    const double half_tau2 = 0.5 * tables_.nodes[t] * tables_.nodes[t] * dt;
    double* dst = q.data() + t * nsp;
    for (std::size_t i = 0; i < nsp; ++i) dst[i] = u[i] + tau * k1_[i] + half_tau2 * (k2_[i] - k1_[i]);
  }
  return true;
}

void Predictor::initial_guess_muscl(std::span<const double> u, const std::array<double, 3>& dx, double dt,
                                    std::span<double> q) {
  guess_muscl_impl(u, dx, dt, false, q);
}

bool Predictor::initial_guess_order3(std::span<const double> u, const std::array<double, 3>& dx, double dt,
                                     std::span<double> q) {
  return guess_order3_impl(u, dx, dt, false, q);
}

void Predictor::picard_map(std::span<const double> q, std::span<const double> u, const std::array<double, 3>& dx,
                           double dt, bool primitive, std::span<double> q_new) {
  rhs(q, layout_.space_time, dx, primitive, r_);
  contract(tables_.picard_operator, r_, layout_.space_time, layout_.dims, pr_);
  const std::size_t nsp = static_cast<std::size_t>(layout_.nsp) * layout_.m;
  for (int t = 0; t < layout_.n1; ++t) {
    const double* src = pr_.data() + t * nsp;
    double* dst = q_new.data() + t * nsp;
    for (std::size_t i = 0; i < nsp; ++i) dst[i] = u[i] + dt * src[i];
  }
}

PredictorResult Predictor::picard_impl(std::span<double> q, std::span<const double> u, const std::array<double, 3>& dx,
                                       double dt, double tolerance, int max_iterations, bool primitive) {
  const std::size_t n = static_cast<std::size_t>(layout_.nst) * layout_.m;
  PredictorResult res;
  res.status = PredictorStatus::kNotConverged;
  for (int it = 1; it <= max_iterations; ++it) {
    picard_map(q, u, dx, dt, primitive, qnew_);
    double diff = 0.0;
    double norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double dq = qnew_[i] - q[i];
      diff += dq * dq;
      norm += qnew_[i] * qnew_[i];
      finite = finite && std::isfinite(qnew_[i]);
      q[i] = qnew_[i];
    }
    res.iterations = it;
    if (!finite) {
      res.residual = std::numeric_limits<double>::quiet_NaN();
      res.status = PredictorStatus::kInadmissible;
      return res;
    }
    diff = std::sqrt(diff / static_cast<double>(n));
    norm = std::sqrt(norm / static_cast<double>(n));
    res.residual = diff / (1.0 + norm);
    if (res.residual <= tolerance) {
      res.status = PredictorStatus::kConverged;
      return res;
    }
  }
  return res;
}

PredictorResult Predictor::picard_solve(std::span<double> q, std::span<const double> u, const std::array<double, 3>& dx,
                                        double dt, double tolerance, int max_iterations) {
  if (max_iterations < 0) max_iterations = 2 * layout_.order + 2;
  PredictorResult res = picard_impl(q, u, dx, dt, tolerance, max_iterations, false);
  if (res.status != PredictorStatus::kInadmissible && !state_ok(q, layout_.nst, false))
    res.status = PredictorStatus::kInadmissible;
  return res;
}

PredictorResult Predictor::predict(std::span<const double> u, const std::array<double, 3>& dx, double dt,
                                   const PredictorOptions& options, std::span<double> q) {
  const bool primitive = options.mode == PredictorMode::kPrimitive && sys_.has_primitive_form();
  const int max_it = options.max_iterations < 0 ? 2 * layout_.order + 2 : options.max_iterations;
  const int m = layout_.m;
  PredictorResult res;

  if (!state_ok(u, layout_.nsp, false)) {
    res.status = PredictorStatus::kInadmissible;
    return res;
  }
  std::span<const double> start = u;
  if (primitive) {
    for (int p = 0; p < layout_.nsp; ++p)
      sys_.cons2prim(u.subspan(static_cast<std::size_t>(p) * m, m), {prim_u_.data() + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)});
    start = {prim_u_.data(), static_cast<std::size_t>(layout_.nsp) * m};
  }

  InitialGuess guess = options.guess;
  if (guess == InitialGuess::kAuto) guess = layout_.order >= 2 ? InitialGuess::kOrder3 : InitialGuess::kMuscl;
  if (guess == InitialGuess::kOrder3)
    res.guess_fallback = !guess_order3_impl(start, dx, dt, primitive, q);
  else
    guess_muscl_impl(start, dx, dt, primitive, q);

  PredictorResult it = picard_impl(q, start, dx, dt, options.tolerance, max_it, primitive);
  res.iterations = it.iterations;
  res.residual = it.residual;
  res.status = it.status;
  if (res.status == PredictorStatus::kInadmissible) return res;

  if (primitive) {
    for (int p = 0; p < layout_.nst; ++p) {
      std::span<double> s{q.data() + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)};
      std::copy(s.begin(), s.end(), point_.begin());
      sys_.prim2cons(point_, s);
    }
  }
  if (!state_ok(q, layout_.nst, false)) res.status = PredictorStatus::kInadmissible;
  return res;
}

double Predictor::fixed_point_residual(std::span<const double> q, std::span<const double> u, const std::array<double, 3>& dx,
                                       double dt) {
  const std::size_t n = static_cast<std::size_t>(layout_.nst) * layout_.m;
  picard_map(q, u, dx, dt, false, qnew_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = qnew_[i] - q[i];
  return rms({tmp_.data(), n}) / (1.0 + rms(q.first(n)));
}

void Predictor::extract_traces(std::span<const double> q, FaceTraces& traces) {
  const ElementLayout& l = layout_;
  const std::size_t face_size = static_cast<std::size_t>(l.nface_st) * l.m;
  traces.values.resize(2 * l.dims * face_size);
  traces.flux.resize(2 * l.dims * face_size);
  for (int d = 0; d < l.dims; ++d) {
    for (int side = 0; side < 2; ++side) {
      const int f = 2 * d + side;
      auto vals = traces.face_values(f, l);
      contract(side == 0 ? tables_.left_trace : tables_.right_trace, q, l.space_time, d, vals);
      auto fl = traces.face_flux(f, l);
      if (sys_.has_flux())
        eval_.flux(vals.data(), l.nface_st, d, fl.data());
      else
        std::fill(fl.begin(), fl.end(), 0.0);
    }
  }
}

}  // namespace aderdg
