#include "aderdg/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

namespace aderdg {

struct Solver::Workspace {
  Workspace(const PdeSystem& sys, const BasisTables& tables, const SolverOptions& opt)
      : pred(sys, tables, opt.batch_width, opt.eval_mode),
        corr(sys, tables, opt.batch_width, opt.eval_mode),
        xform(tables, sys.dims(), sys.num_vars()),
        fv(sys, tables, opt.predictor.mode == PredictorMode::kPrimitive, opt.batch_width, opt.eval_mode),
        eval(sys, opt.batch_width, opt.eval_mode) {
    const ElementLayout& l = pred.layout();
    q.resize(static_cast<std::size_t>(l.nst) * l.m);
    ghost_values.resize(static_cast<std::size_t>(l.nface_st) * l.m);
    ghost_flux.resize(ghost_values.size());
    ghost_nodes.resize(static_cast<std::size_t>(l.nsp) * l.m);
    ghost_sub.resize(static_cast<std::size_t>(l.nsub) * l.m);
    cand_sub.resize(ghost_sub.size());
    patch.resize(fv.patch_size());
    face_a.resize(static_cast<std::size_t>(l.nsp) * l.m);
    face_b.resize(face_a.size());
    lift.resize(face_a.size());
    lo.resize(l.m);
    hi.resize(l.m);
  }

  Predictor pred;
  Corrector corr;
  SubcellTransform xform;
  SubcellSolver fv;
  BatchEvaluator eval;
  FaceTraces traces;
  std::vector<double> q, ghost_values, ghost_flux, ghost_nodes, ghost_sub, cand_sub, patch, face_a, face_b, lift, lo, hi;
};

template <typename F>
void Solver::parallel_for(int n, F&& f) {
  std::exception_ptr error;
  if (opt_.execution == Execution::kParallel) {
#pragma omp parallel
    {
      Workspace& ws = *workspaces_[omp_get_thread_num()];
#pragma omp for schedule(static)
      for (int i = 0; i < n; ++i) {
        try {
          f(i, ws);
        } catch (...) {
#pragma omp critical(aderdg_error)
          if (!error) error = std::current_exception();
        }
      }
    }
  } else {
    for (int i = 0; i < n; ++i) f(i, *workspaces_[0]);
  }
  if (error) std::rethrow_exception(error);
}

Solver::Solver(std::shared_ptr<const PdeSystem> system, const CartesianMesh& mesh, const SolverOptions& options)
    : sys_(std::move(system)),
      mesh_(mesh),
      opt_(options),
      tables_(basis_tables(options.order)),
      layout_(options.order, sys_->dims(), sys_->num_vars()) {
  if (mesh_.dims != sys_->dims()) throw std::invalid_argument("mesh and system dimensions differ");
  if (opt_.limiter && opt_.order < 1) throw std::invalid_argument("the subcell limiter needs order >= 1");
  const int threads = opt_.execution == Execution::kParallel ? std::max(1, omp_get_max_threads()) : 1;
  for (int i = 0; i < threads; ++i) workspaces_.push_back(std::make_unique<Workspace>(*sys_, tables_, opt_));

  const int nc = mesh_.num_cells();
  const std::size_t cs = cell_size();
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * layout_.m;
  const std::size_t tb = static_cast<std::size_t>(2 * layout_.dims) * layout_.nface_st * layout_.m;
  state_.u.assign(nc * cs, 0.0);
  state_.mask.assign(nc, CellStatus::kOk);
  state_.stored_subcells.assign(nc * sb, 0.0);
  state_.has_stored.assign(nc, 0);
  sub_n_.assign(nc * sb, 0.0);
  traces_values_.assign(nc * tb, 0.0);
  traces_flux_.assign(nc * tb, 0.0);
  vol_.assign(nc * layout_.dims * cs, 0.0);
  ns_.assign(nc * cs, 0.0);
  pred_fail_.assign(nc, 0);
  pred_iters_.assign(nc, 0);
  guess_fallback_.assign(nc, 0);
  for (int d = 0; d < layout_.dims; ++d)
    face_g_[d].assign(static_cast<std::size_t>(mesh_.num_faces(d)) * 2 * layout_.nface_sp * layout_.m, 0.0);
  cand_.assign(nc * cs, 0.0);
  accepted_.assign(nc * cs, 0.0);
  status_.assign(nc, CellStatus::kOk);
  fv_slot_.assign(nc, -1);
}

Solver::~Solver() = default;

std::array<double, 3> Solver::node_position(int e, int p) const {
  auto x = mesh_.origin(e);
  for (int d = 0; d < layout_.dims; ++d) {
    x[d] += tables_.nodes[p % layout_.n1] * mesh_.dx[d];
    p /= layout_.n1;
  }
  return x;
}

void Solver::initialize(const StateFunction& q0) {
  const int m = layout_.m;
  const std::size_t cs = cell_size();
  for (int e = 0; e < mesh_.num_cells(); ++e) {
    for (int p = 0; p < layout_.nsp; ++p) {
      std::span<double> q{state_.u.data() + e * cs + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)};
      q0(node_position(e, p), 0.0, q);
      if (!sys_->admissible(q)) throw InadmissibleState("initial data inadmissible in cell " + std::to_string(e));
    }
  }
  state_.time = 0.0;
  state_.step = 0;
  std::fill(state_.mask.begin(), state_.mask.end(), CellStatus::kOk);
  std::fill(state_.has_stored.begin(), state_.has_stored.end(), 0);
  state_.last = StepReport{};
}

double Solver::compute_dt() const {
  const int m = layout_.m;
  const std::size_t cs = cell_size();
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * m;
  double dt = std::numeric_limits<double>::infinity();
  bool any = false;
  std::unique_ptr<SubcellTransform> xform;
  std::vector<double> sub;
  for (int e = 0; e < mesh_.num_cells(); ++e) {
    std::array<double, 3> lambda{};
    bool ok;
    if (state_.has_stored[e]) {
      ok = max_speeds(*sys_, state_.stored_subcells.data() + e * sb, layout_.nsub, lambda);
    } else {
      ok = max_speeds(*sys_, state_.u.data() + e * cs, layout_.nsp, lambda);
      if (!ok) {
        if (!xform) {
          xform = std::make_unique<SubcellTransform>(tables_, layout_.dims, m);
          sub.resize(sb);
        }
        xform->project(cell(e), sub);
        ok = max_speeds(*sys_, sub.data(), layout_.nsub, lambda);
      }
    }
    if (!ok) continue;
    any = true;
    dt = std::min(dt, cfl_timestep(lambda, mesh_.dx, layout_.dims, opt_.cfl));
  }
  if (!any) throw std::runtime_error("compute_dt: no cell has a finite wave speed");
  return dt;
}

void Solver::project_all_subcells() {
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * layout_.m;
  parallel_for(mesh_.num_cells(), [&](int e, Workspace& ws) {
    std::span<double> dst{sub_n_.data() + e * sb, sb};
    if (state_.has_stored[e]) {
      std::copy_n(state_.stored_subcells.data() + e * sb, sb, dst.data());
    } else {
      ws.xform.project(cell(e), dst);
    }
  });
}

void Solver::ghost_trace(int dir, int side, int inner_cell, double dt, std::span<const double> inner_values,
                         std::span<double> values, std::span<double> flux, Workspace& ws) const {
  const int m = layout_.m;
  const int npts = layout_.nface_st;
  const BoundaryType bc = mesh_.bc[dir][side];
  if (bc == BoundaryType::kExact) {
    if (!exact_) throw std::runtime_error("exact boundary requires an exact solution");
    const auto origin = mesh_.origin(inner_cell);
    for (int p = 0; p < npts; ++p) {
      std::array<double, 3> x = origin;
      int rest = p;
      for (int d = 0; d < layout_.dims; ++d) {
        if (d == dir) {
          x[d] = side == 0 ? mesh_.lo[d] : mesh_.hi[d];
          continue;
        }
        x[d] += tables_.nodes[rest % layout_.n1] * mesh_.dx[d];
        rest /= layout_.n1;
      }
      const double t = state_.time + tables_.nodes[rest] * dt;
      exact_(x, t, values.subspan(static_cast<std::size_t>(p) * m, m));
    }
  } else {
    std::copy(inner_values.begin(), inner_values.end(), values.begin());
    if (bc == BoundaryType::kWall)
      for (int p = 0; p < npts; ++p) sys_->reflect(values.subspan(static_cast<std::size_t>(p) * m, m), dir);
  }
  if (sys_->has_flux())
    ws.eval.flux(values.data(), npts, dir, flux.data());
  else
    std::fill(flux.begin(), flux.end(), 0.0);
}

const double* Solver::neighbor_subcells(int e, const std::array<int, 3>& off, Workspace& ws) const {
  const int m = layout_.m;
  const int ns = layout_.ns;
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * m;
  auto c = mesh_.coords(e);
  std::array<int, 3> outside{-1, -1, -1};
  bool any_outside = false;
  bool exact = false;
  std::array<int, 3> src = c;
  for (int d = 0; d < layout_.dims; ++d) {
    c[d] += off[d];
    src[d] = c[d];
    const int n = mesh_.cells[d];
    if (c[d] >= 0 && c[d] < n) continue;
    if (mesh_.periodic(d)) {
      src[d] = ((c[d] % n) + n) % n;
      continue;
    }
    outside[d] = c[d] < 0 ? 0 : 1;
    any_outside = true;
    exact = exact || mesh_.bc[d][outside[d]] == BoundaryType::kExact;
    src[d] = c[d] < 0 ? -1 - c[d] : 2 * n - 1 - c[d];
  }
  if (!any_outside) return sub_n_.data() + mesh_.index(src) * sb;

  if (exact) {
    if (!exact_) throw std::runtime_error("exact boundary requires an exact solution");
    std::array<double, 3> origin{};
    for (int d = 0; d < 3; ++d) origin[d] = mesh_.lo[d] + c[d] * mesh_.dx[d];
    for (int p = 0; p < layout_.nsp; ++p) {
      std::array<double, 3> x = origin;
      int rest = p;
      for (int d = 0; d < layout_.dims; ++d) {
        x[d] += tables_.nodes[rest % layout_.n1] * mesh_.dx[d];
        rest /= layout_.n1;
      }
      exact_(x, state_.time, {ws.ghost_nodes.data() + static_cast<std::size_t>(p) * m, static_cast<std::size_t>(m)});
    }
    ws.xform.project(ws.ghost_nodes, ws.ghost_sub);
    return ws.ghost_sub.data();
  }

  // Mirror image of the interior cell, with wall reflection where applicable.
  const double* from = sub_n_.data() + mesh_.index(src) * sb;
  for (int s = 0; s < layout_.nsub; ++s) {
    std::array<int, 3> si{0, 0, 0};
    int rest = s;
    for (int d = 0; d < layout_.dims; ++d) {
      si[d] = rest % ns;
      rest /= ns;
      if (outside[d] >= 0) si[d] = ns - 1 - si[d];
    }
    const int t = si[0] + ns * (si[1] + ns * si[2]);
    std::span<double> q{ws.ghost_sub.data() + static_cast<std::size_t>(s) * m, static_cast<std::size_t>(m)};
    std::copy_n(from + static_cast<std::size_t>(t) * m, m, q.data());
    for (int d = 0; d < layout_.dims; ++d)
      if (outside[d] >= 0 && mesh_.bc[d][outside[d]] == BoundaryType::kWall) sys_->reflect(q, d);
  }
  return ws.ghost_sub.data();
}

void Solver::gather_patch(int e, Workspace& ws) const {
  const int m = layout_.m;
  const int ns = layout_.ns;
  const int P = ws.fv.patch_extent();
  const int D = layout_.dims;
  std::array<int, 3> o{0, 0, 0};
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int d = 0; d < D; ++d) {
    lo[d] = -1;
    hi[d] = 1;
  }
  for (o[2] = lo[2]; o[2] <= hi[2]; ++o[2])
    for (o[1] = lo[1]; o[1] <= hi[1]; ++o[1])
      for (o[0] = lo[0]; o[0] <= hi[0]; ++o[0]) {
        const double* src = neighbor_subcells(e, o, ws);
        for (int s = 0; s < layout_.nsub; ++s) {
          int rest = s;
          int pidx = 0;
          int mult = 1;
          bool in = true;
          for (int d = 0; d < D; ++d) {
            const int pi = 2 + o[d] * ns + rest % ns;
            rest /= ns;
            in = in && pi >= 0 && pi < P;
            pidx += pi * mult;
            mult *= P;
          }
          if (in) std::copy_n(src + static_cast<std::size_t>(s) * m, m, ws.patch.data() + static_cast<std::size_t>(pidx) * m);
        }
      }
}

bool Solver::try_step(double dt, StepReport& rep) {
  const int nc = mesh_.num_cells();
  const int m = layout_.m;
  const int D = layout_.dims;
  const std::size_t cs = cell_size();
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * m;
  const std::size_t fst = static_cast<std::size_t>(layout_.nface_st) * m;
  const std::size_t tb = 2 * D * fst;
  const std::size_t fg = static_cast<std::size_t>(layout_.nface_sp) * m;
  const auto& dx = mesh_.dx;

  // Phase 1: predictor, traces and volume terms.
  parallel_for(nc, [&](int e, Workspace& ws) {
    PredictorResult r = ws.pred.predict(cell(e), dx, dt, opt_.predictor, ws.q);
    const bool fail = r.status != PredictorStatus::kConverged;
    pred_fail_[e] = fail ? 1 : 0;
    pred_iters_[e] = r.iterations;
    guess_fallback_[e] = r.guess_fallback ? 1 : 0;
    if (fail && opt_.limiter) {
      // The cell will be recomputed by the subcell scheme; give its
      // neighbours a bounded, admissible trace meanwhile.
      const double* sub = sub_n_.data() + e * sb;
      for (int v = 0; v < m; ++v) {
        double s = 0.0;
        for (int k = 0; k < layout_.nsub; ++k) s += sub[static_cast<std::size_t>(k) * m + v];
        ws.lo[v] = s / layout_.nsub;
      }
      for (int p = 0; p < layout_.nst; ++p) std::copy_n(ws.lo.data(), m, ws.q.data() + static_cast<std::size_t>(p) * m);
    }
    ws.pred.extract_traces(ws.q, ws.traces);
    std::copy(ws.traces.values.begin(), ws.traces.values.end(), traces_values_.begin() + e * tb);
    std::copy(ws.traces.flux.begin(), ws.traces.flux.end(), traces_flux_.begin() + e * tb);
    const bool ns = ws.corr.volume_terms(ws.q, dx, {vol_.data() + e * D * cs, D * cs}, {ns_.data() + e * cs, cs});
    if (e == 0) has_ns_ = ns;
  });

  // Phase 2a: face Riemann problems.
  for (int d = 0; d < D; ++d) {
    const auto fe = mesh_.face_extent(d);
    parallel_for(mesh_.num_faces(d), [&](int f, Workspace& ws) {
      std::array<int, 3> c{f % fe[0], (f / fe[0]) % fe[1], f / (fe[0] * fe[1])};
      const int n = mesh_.cells[d];
      std::array<int, 3> cl = c, cr = c;
      cl[d] = c[d] - 1;
      int lower = -1, upper = -1;
      if (cl[d] >= 0) {
        lower = mesh_.index(cl);
      } else if (mesh_.periodic(d)) {
        cl[d] = n - 1;
        lower = mesh_.index(cl);
      }
      if (cr[d] < n) {
        upper = mesh_.index(cr);
      } else if (mesh_.periodic(d)) {
        cr[d] = 0;
        upper = mesh_.index(cr);
      }
      std::span<const double> qL, FL, qR, FR;
      if (lower >= 0) {
        qL = {traces_values_.data() + lower * tb + (2 * d + 1) * fst, fst};
        FL = {traces_flux_.data() + lower * tb + (2 * d + 1) * fst, fst};
      }
      if (upper >= 0) {
        qR = {traces_values_.data() + upper * tb + (2 * d) * fst, fst};
        FR = {traces_flux_.data() + upper * tb + (2 * d) * fst, fst};
      }
      if (lower < 0) {
        ghost_trace(d, 0, upper, dt, qR, ws.ghost_values, ws.ghost_flux, ws);
        qL = ws.ghost_values;
        FL = ws.ghost_flux;
      } else if (upper < 0) {
        ghost_trace(d, 1, lower, dt, qL, ws.ghost_values, ws.ghost_flux, ws);
        qR = ws.ghost_values;
        FR = ws.ghost_flux;
      }
      double* g = face_g_[d].data() + static_cast<std::size_t>(f) * 2 * fg;
      ws.corr.face_flux(d, qL, FL, qR, FR, {g, fg}, {g + fg, fg});
    });
  }

  auto face_contrib = [&](int e, int d, int side) -> std::span<const double> {
    const int f = mesh_.cell_face(e, d, side);
    // The lower face of a cell carries the face's "upper" contribution and vice versa.
    return {face_g_[d].data() + (static_cast<std::size_t>(f) * 2 + (side == 0 ? 1 : 0)) * fg, fg};
  };

  // Phase 2b: candidate update.
  parallel_for(nc, [&](int e, Workspace& ws) {
    std::array<std::span<const double>, 6> faces{};
    for (int d = 0; d < D; ++d) {
      faces[2 * d] = face_contrib(e, d, 0);
      faces[2 * d + 1] = face_contrib(e, d, 1);
    }
    ws.corr.update(cell(e), {vol_.data() + e * D * cs, D * cs}, {ns_.data() + e * cs, cs}, has_ns_, faces, dx, dt,
                   {cand_.data() + e * cs, cs});
  });

  rep.predictor_failures = 0;
  rep.guess_fallbacks = 0;
  rep.max_picard_iterations = 0;
  for (int e = 0; e < nc; ++e) {
    rep.predictor_failures += pred_fail_[e];
    rep.guess_fallbacks += guess_fallback_[e];
    rep.max_picard_iterations = std::max(rep.max_picard_iterations, pred_iters_[e]);
  }

  if (!opt_.limiter) {
    std::copy(cand_.begin(), cand_.end(), accepted_.begin());
    std::fill(status_.begin(), status_.end(), CellStatus::kOk);
    rep.troubled = rep.neighbors = rep.first_order_subcells = 0;
    return true;
  }

  // Phase 3: detection.
  parallel_for(nc, [&](int e, Workspace& ws) {
    bool troubled = pred_fail_[e] != 0;
    const double* cand = cand_.data() + e * cs;
    if (!troubled) troubled = !ws.eval.all_admissible(cand, layout_.nsp);
    if (!troubled) {
      ws.xform.project({cand, cs}, ws.cand_sub);
      troubled = !ws.eval.all_admissible(ws.cand_sub.data(), layout_.nsub);
      if (!troubled) {
        std::fill(ws.lo.begin(), ws.lo.end(), std::numeric_limits<double>::infinity());
        std::fill(ws.hi.begin(), ws.hi.end(), -std::numeric_limits<double>::infinity());
        merge_bounds({sub_n_.data() + e * sb, sb}, m, ws.lo, ws.hi);
        for (int d = 0; d < D; ++d)
          for (int side = 0; side < 2; ++side) {
            const int nb = mesh_.neighbor(e, d, side);
            if (nb >= 0) merge_bounds({sub_n_.data() + nb * sb, sb}, m, ws.lo, ws.hi);
          }
        troubled = dmp_violated(ws.cand_sub, m, ws.lo, ws.hi, opt_.dmp);
      }
    }
    status_[e] = troubled ? CellStatus::kTroubled : CellStatus::kOk;
  });

  std::fill(fv_slot_.begin(), fv_slot_.end(), -1);
  fv_avg_.clear();
  fv_faces_.clear();
  const std::size_t ffs = workspaces_[0]->fv.face_flux_size();
  std::vector<std::uint8_t> fv_fail(nc, 0), new_trouble(nc, 0);
  std::vector<int> fallbacks(nc, 0);
  int nslots = 0;
  const std::array<double, 3> dxs{dx[0] / layout_.ns, dx[1] / layout_.ns, dx[2] / layout_.ns};

  for (;;) {
    // Subcell recomputation of newly troubled cells from tn data.
    std::vector<int> pending;
    for (int e = 0; e < nc; ++e)
      if (status_[e] == CellStatus::kTroubled && fv_slot_[e] < 0) {
        fv_slot_[e] = nslots++;
        pending.push_back(e);
      }
    fv_avg_.resize(nslots * sb);
    fv_faces_.resize(nslots * ffs);
    parallel_for(static_cast<int>(pending.size()), [&](int k, Workspace& ws) {
      const int e = pending[k];
      gather_patch(e, ws);
      const int slot = fv_slot_[e];
      const bool ok = ws.fv.step(ws.patch, dxs, dt, {fv_avg_.data() + slot * sb, sb}, {fv_faces_.data() + slot * ffs, ffs});
      fv_fail[e] = ok ? 0 : 1;
      fallbacks[e] = ws.fv.fallbacks();
    });
    for (int e : pending)
      if (fv_fail[e]) return false;

    // Unlimited cells next to limited ones take the subcell fluxes on the
    // shared faces so that the update stays conservative.
    std::fill(new_trouble.begin(), new_trouble.end(), 0);
    parallel_for(nc, [&](int e, Workspace& ws) {
      if (status_[e] == CellStatus::kTroubled) return;
      double* out = accepted_.data() + e * cs;
      std::copy_n(cand_.data() + e * cs, cs, out);
      bool neighbor = false;
      for (int d = 0; d < D; ++d)
        for (int side = 0; side < 2; ++side) {
          const int nb = mesh_.neighbor(e, d, side);
          if (nb < 0 || nb == e || status_[nb] != CellStatus::kTroubled) continue;
          neighbor = true;
          // The troubled cell sees this face as its face (d, 1 - side); this
          // cell is the upper element if side == 0.
          const int nface = 2 * d + (1 - side);
          const int part = side == 0 ? 1 : 0;
          const double* gfv = fv_faces_.data() + fv_slot_[nb] * ffs +
                              (static_cast<std::size_t>(2 * nface + part)) * layout_.nsubface * m;
          TensorShape shape = layout_.subcells.with_extent(d, 1);
          std::span<const double> cur{gfv, static_cast<std::size_t>(layout_.nsubface) * m};
          bool use_a = true;
          for (int e2 = 0; e2 < D; ++e2) {
            if (e2 == d) continue;
            std::vector<double>& dst = use_a ? ws.face_a : ws.face_b;
            contract(tables_.face_subcell_weights, cur, shape, e2, dst);
            shape = shape.with_extent(e2, layout_.n1);
            cur = {dst.data(), static_cast<std::size_t>(shape.size())};
            use_a = !use_a;
          }
          std::span<const double> gdg = face_contrib(e, d, side);
          std::vector<double>& diff = use_a ? ws.face_a : ws.face_b;
          for (std::size_t i = 0; i < fg; ++i) diff[i] = cur[i] - gdg[i];
          contract(side == 0 ? tables_.left_lift : tables_.right_lift, diff, layout_.spatial.with_extent(d, 1), d, ws.lift);
          const double scale = dt / dx[d];
          for (std::size_t i = 0; i < cs; ++i) out[i] -= scale * ws.lift[i];
        }
      status_[e] = neighbor ? CellStatus::kNeighbor : CellStatus::kOk;
      if (neighbor) {
        bool ok = ws.eval.all_admissible(out, layout_.nsp);
        if (ok) {
          ws.xform.project({out, cs}, ws.cand_sub);
          ok = ws.eval.all_admissible(ws.cand_sub.data(), layout_.nsub);
        }
        new_trouble[e] = ok ? 0 : 1;
      }
    });
    bool again = false;
    for (int e = 0; e < nc; ++e)
      if (new_trouble[e]) {
        status_[e] = CellStatus::kTroubled;
        again = true;
      }
    if (!again) break;
  }

  // Troubled cells: polynomial recovered from the new subcell averages.
  parallel_for(nc, [&](int e, Workspace& ws) {
    if (status_[e] != CellStatus::kTroubled) return;
    ws.xform.recover({fv_avg_.data() + fv_slot_[e] * sb, sb}, {accepted_.data() + e * cs, cs});
  });

  rep.troubled = rep.neighbors = rep.first_order_subcells = 0;
  for (int e = 0; e < nc; ++e) {
    if (status_[e] == CellStatus::kTroubled) {
      ++rep.troubled;
      rep.first_order_subcells += fallbacks[e];
    } else if (status_[e] == CellStatus::kNeighbor) {
      ++rep.neighbors;
    }
  }
  return true;
}

double Solver::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive and finite");
  StepReport rep;
  project_all_subcells();
  while (!try_step(dt, rep)) {
    if (rep.restarts >= opt_.max_restarts)
      throw RestartsExhausted("subcell update inadmissible after " + std::to_string(opt_.max_restarts) +
                              " time-step halvings at step " + std::to_string(state_.step));
    ++rep.restarts;
    dt *= 0.5;
  }
  rep.dt = dt;

  const int nc = mesh_.num_cells();
  const std::size_t sb = static_cast<std::size_t>(layout_.nsub) * layout_.m;
  state_.u.swap(accepted_);
  for (int e = 0; e < nc; ++e) {
    const bool limited = status_[e] == CellStatus::kTroubled;
    state_.has_stored[e] = limited ? 1 : 0;
    if (limited) std::copy_n(fv_avg_.data() + fv_slot_[e] * sb, sb, state_.stored_subcells.data() + e * sb);
  }
  state_.mask = status_;
  state_.time += dt;
  state_.step += 1;
  state_.last = rep;
  return dt;
}

void Solver::run(double final_time, long max_steps, const std::function<void(const Solver&)>& on_step) {
  const double eps = 1e-12 * std::max(1.0, std::abs(final_time));
  while (state_.time < final_time - eps && (max_steps < 0 || state_.step < max_steps)) {
    double dt = compute_dt();
    if (state_.time + dt > final_time) dt = final_time - state_.time;
    step(dt);
    if (on_step) on_step(*this);
  }
}

ErrorNorms Solver::error_norms(const StateFunction& exact, double t, int quantity) const {
  const int m = layout_.m;
  const auto& w = workspaces_[0]->corr.node_weights();
  const double vol = mesh_.cell_volume();
  std::vector<double> q(m);
  ErrorNorms n;
  for (int e = 0; e < mesh_.num_cells(); ++e)
    for (int p = 0; p < layout_.nsp; ++p) {
      exact(node_position(e, p), t, q);
      const double err = std::abs(state_.u[e * cell_size() + static_cast<std::size_t>(p) * m + quantity] - q[quantity]);
      n.l1 += w[p] * vol * err;
      n.l2 += w[p] * vol * err * err;
      n.linf = std::max(n.linf, err);
    }
  n.l2 = std::sqrt(n.l2);
  return n;
}

std::vector<double> Solver::totals() const {
  const int m = layout_.m;
  const auto& w = workspaces_[0]->corr.node_weights();
  const double vol = mesh_.cell_volume();
  std::vector<double> tot(m, 0.0);
  for (int e = 0; e < mesh_.num_cells(); ++e)
    for (int p = 0; p < layout_.nsp; ++p)
      for (int v = 0; v < m; ++v) tot[v] += w[p] * vol * state_.u[e * cell_size() + static_cast<std::size_t>(p) * m + v];
  return tot;
}

double Solver::limited_fraction() const {
  int n = 0;
  for (auto s : state_.mask) n += s == CellStatus::kTroubled ? 1 : 0;
  return static_cast<double>(n) / mesh_.num_cells();
}

}  // namespace aderdg
