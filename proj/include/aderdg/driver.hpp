#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aderdg/config.hpp"
#include "aderdg/kernels.hpp"
#include "aderdg/problems.hpp"
#include "aderdg/solver.hpp"

namespace aderdg {

/// A configured solver together with its test problem.
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);

  Solver& solver() { return *solver_; }
  const Solver& solver() const { return *solver_; }
  const Problem& problem() const { return problem_; }
  const RunConfig& config() const { return config_; }

  struct Summary {
    long steps = 0;
    double time = 0.0;
    double wall_s = 0.0;
    double max_limited_fraction = 0.0;
    long limited_steps = 0;
    long restarts = 0;
    bool finite = true;
    std::vector<double> initial_totals;
    std::vector<double> final_totals;
  };

  /// Runs to final_time / max_steps. With `outputs`, writes the diagnostics
  /// CSV and field snapshots requested by the configuration.
  Summary run(bool outputs = false);

  bool has_exact() const { return static_cast<bool>(problem_.exact); }
  ErrorNorms errors() const;

 private:
  RunConfig config_;
  std::unique_ptr<Solver> solver_;
  Problem problem_;
};

struct ConvergenceRow {
  int grid = 0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double o1 = 0.0, o2 = 0.0, oinf = 0.0;  // NaN on the first row
  double wall_s = 0.0;
  std::string failure;  // empty on success
};

struct ConvergenceReport {
  int order = 0;
  std::vector<ConvergenceRow> rows;
  int theoretical_order() const { return order + 1; }
};

/// Runs `base` once per grid (cells = g in every direction) and measures
/// the error against the exact solution at final_time. A failed run is
/// recorded in its row; the remaining grids still run.
ConvergenceReport convergence_study(const RunConfig& base, const std::vector<int>& grids);
std::string convergence_csv(const ConvergenceReport& report);
std::string convergence_table(const ConvergenceReport& report);

/// Times a full run of `config` and reports the time per DOF update.
TduReport bench_tdu(const RunConfig& config);
std::string tdu_csv(const TduReport& report);

}  // namespace aderdg
