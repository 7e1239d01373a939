#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "aderdg/basis.hpp"
#include "aderdg/corrector.hpp"
#include "aderdg/layout.hpp"
#include "aderdg/limiter.hpp"
#include "aderdg/mesh.hpp"
#include "aderdg/pde.hpp"
#include "aderdg/predictor.hpp"
#include "aderdg/problems.hpp"

namespace aderdg {

enum class Execution { kSerial, kParallel };

struct SolverOptions {
  int order = 3;
  double cfl = 0.1;
  bool limiter = true;
  DmpOptions dmp;
  PredictorOptions predictor;
  int batch_width = 8;
  EvalMode eval_mode = EvalMode::kBatched;
  Execution execution = Execution::kParallel;
  int max_restarts = 3;
};

struct StepReport {
  double dt = 0.0;
  int restarts = 0;
  int troubled = 0;
  int neighbors = 0;
  int predictor_failures = 0;
  int guess_fallbacks = 0;
  int first_order_subcells = 0;
  int max_picard_iterations = 0;
};

struct RunState {
  double time = 0.0;
  long step = 0;
  std::vector<double> u;                 // cells x (N+1)^d x m
  std::vector<CellStatus> mask;          // status assigned in the last step
  std::vector<double> stored_subcells;   // cells x (2N+1)^d x m, valid where has_stored
  std::vector<std::uint8_t> has_stored;  // cell was limited in the last step
  StepReport last;
};

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

class RestartsExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ADER-DG time integrator with a posteriori subcell limiting on a uniform
/// Cartesian mesh. Each step runs three barrier-separated phases:
/// predictor + volume terms per cell, Riemann solves per face, and update +
/// limiting per cell. All reductions are performed serially in index order so
/// results do not depend on the thread count.
class Solver {
 public:
  Solver(std::shared_ptr<const PdeSystem> system, const CartesianMesh& mesh, const SolverOptions& options);
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;
  ~Solver();

  const PdeSystem& system() const { return *sys_; }
  const CartesianMesh& mesh() const { return mesh_; }
  const SolverOptions& options() const { return opt_; }
  const BasisTables& tables() const { return tables_; }
  const ElementLayout& layout() const { return layout_; }
  RunState& state() { return state_; }
  const RunState& state() const { return state_; }

  /// Exact solution used by exact boundaries (may be empty otherwise).
  void set_exact(StateFunction exact) { exact_ = std::move(exact); }
  /// Collocation projection of q0 onto the nodal basis; resets time and step.
  void initialize(const StateFunction& q0);

  /// Physical coordinates of spatial node p of cell e.
  std::array<double, 3> node_position(int e, int p) const;

  /// CFL time step (stored subcell averages are used for cells limited in the last step).
  double compute_dt() const;
  /// One full step with the given dt (restarts may shrink it). Returns the dt taken.
  double step(double dt);
  /// Steps until final_time or max_steps (< 0: unlimited). Calls `on_step` after each step.
  void run(double final_time, long max_steps = -1, const std::function<void(const Solver&)>& on_step = {});

  ErrorNorms error_norms(const StateFunction& exact, double t, int quantity) const;
  /// Domain integrals of every quantity.
  std::vector<double> totals() const;
  double limited_fraction() const;

  std::size_t cell_size() const { return static_cast<std::size_t>(layout_.nsp) * layout_.m; }
  std::span<const double> cell(int e) const { return {state_.u.data() + e * cell_size(), cell_size()}; }

 private:
  struct Workspace;

  bool try_step(double dt, StepReport& report);
  void project_all_subcells();
  void ghost_trace(int dir, int side, int inner_cell, double dt, std::span<const double> inner_values,
                   std::span<double> values, std::span<double> flux, Workspace& ws) const;
  const double* neighbor_subcells(int e, const std::array<int, 3>& off, Workspace& ws) const;
  void gather_patch(int e, Workspace& ws) const;
  template <typename F>
  void parallel_for(int n, F&& f);

  std::shared_ptr<const PdeSystem> sys_;
  CartesianMesh mesh_;
  SolverOptions opt_;
  const BasisTables& tables_;
  ElementLayout layout_;
  StateFunction exact_;
  RunState state_;
  std::vector<std::unique_ptr<Workspace>> workspaces_;

  // Per-step buffers.
  std::vector<double> sub_n_;          // tn subcell averages
  std::vector<double> traces_values_;  // cells x 2d x nface_st x m
  std::vector<double> traces_flux_;
  std::vector<double> vol_;            // cells x d x nsp x m
  std::vector<double> ns_;             // cells x nsp x m
  bool has_ns_ = false;
  std::vector<std::uint8_t> pred_fail_;
  std::vector<int> pred_iters_;
  std::vector<std::uint8_t> guess_fallback_;
  std::array<std::vector<double>, 3> face_g_;  // faces x {lower, upper} x nface_sp x m
  std::vector<double> cand_;
  std::vector<double> accepted_;
  std::vector<CellStatus> status_;
  std::vector<int> fv_slot_;
  std::vector<double> fv_avg_;
  std::vector<double> fv_faces_;
};

}  // namespace aderdg
