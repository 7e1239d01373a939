#include "aderdg/driver.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "aderdg/output.hpp"

namespace aderdg {

Simulation::Simulation(const RunConfig& config) : config_(config) {
  auto errs = validate(config_);
  if (!errs.empty()) throw ConfigError(errs);
  solver_ = std::make_unique<Solver>(make_system(config_), make_mesh(config_), make_solver_options(config_));
  problem_ = make_problem(config_.ic, solver_->system(), solver_->mesh(), config_.advection_velocity);
  if (config_.error_quantity >= solver_->system().num_vars())
    throw ConfigError({"error_quantity: exceeds the number of quantities"});
  solver_->set_exact(problem_.exact);
  solver_->initialize(problem_.initial);
}

Simulation::Summary Simulation::run(bool outputs) {
  Summary s;
  s.initial_totals = solver_->totals();
  std::unique_ptr<DiagnosticsWriter> diag;
  if (outputs && !config_.diagnostics_file.empty()) {
    const auto parent = std::filesystem::path(config_.diagnostics_file).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    diag = std::make_unique<DiagnosticsWriter>(config_.diagnostics_file, solver_->system().quantity_names());
  }
  const bool fields = outputs && config_.output_every > 0;
  if (fields) write_fields(*solver_, config_.output_format, config_.output_dir, config_.output_prefix);

  const auto t0 = std::chrono::steady_clock::now();
  solver_->run(config_.final_time, config_.max_steps, [&](const Solver& sv) {
    const auto& st = sv.state();
    const double frac = sv.limited_fraction();
    s.max_limited_fraction = std::max(s.max_limited_fraction, frac);
    s.limited_steps += st.last.troubled > 0 ? 1 : 0;
    s.restarts += st.last.restarts;
    if (diag) diag->write(sv);
    if (fields && st.step % config_.output_every == 0)
      write_fields(sv, config_.output_format, config_.output_dir, config_.output_prefix);
  });
  s.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.steps = solver_->state().step;
  s.time = solver_->state().time;
  s.final_totals = solver_->totals();
  for (double v : solver_->state().u) s.finite = s.finite && std::isfinite(v);
  return s;
}

ErrorNorms Simulation::errors() const {
  if (!problem_.exact) throw std::runtime_error("initial condition '" + problem_.name + "' has no exact solution");
  return solver_->error_norms(problem_.exact, solver_->state().time, config_.error_quantity);
}

ConvergenceReport convergence_study(const RunConfig& base, const std::vector<int>& grids) {
  ConvergenceReport rep;
  rep.order = base.order;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int g : grids) {
    ConvergenceRow row;
    row.grid = g;
    row.o1 = row.o2 = row.oinf = nan;
    RunConfig cfg = base;
    cfg.cells = {g, g, g};
    try {
      Simulation sim(cfg);
      auto sum = sim.run(false);
      row.wall_s = sum.wall_s;
      if (!sum.finite) throw std::runtime_error("non-finite solution");
      const auto e = sim.errors();
      row.l1 = e.l1;
      row.l2 = e.l2;
      row.linf = e.linf;
    } catch (const std::exception& ex) {
      row.failure = ex.what();
      row.l1 = row.l2 = row.linf = nan;
    }
    if (!rep.rows.empty()) {
      const auto& prev = rep.rows.back();
      const double r = std::log(static_cast<double>(g) / prev.grid);  // log(h_prev / h)
      row.o1 = std::log(prev.l1 / row.l1) / r;
      row.o2 = std::log(prev.l2 / row.l2) / r;
      row.oinf = std::log(prev.linf / row.linf) / r;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::ostringstream o;
  o << "grid,l1,l2,linf,o1,o2,oinf\n";
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const auto& r : report.rows)
    o << r.grid << "," << num(r.l1) << "," << num(r.l2) << "," << num(r.linf) << "," << num(r.o1) << "," << num(r.o2)
      << "," << num(r.oinf) << "\n";
  return o.str();
}

std::string convergence_table(const ConvergenceReport& report) {
  std::ostringstream o;
  char buf[200];
  std::snprintf(buf, sizeof buf, "N = %d, theoretical order %d\n", report.order, report.theoretical_order());
  o << buf;
  std::snprintf(buf, sizeof buf, "%6s %12s %12s %12s %7s %7s %7s\n", "grid", "L1", "L2", "Linf", "O(L1)", "O(L2)", "O(Linf)");
  o << buf;
  for (const auto& r : report.rows) {
    if (!r.failure.empty()) {
      std::snprintf(buf, sizeof buf, "%6d  failed: %s\n", r.grid, r.failure.c_str());
      o << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, "%6d %12.4E %12.4E %12.4E", r.grid, r.l1, r.l2, r.linf);
    o << buf;
    for (double ord : {r.o1, r.o2, r.oinf}) {
      if (std::isnan(ord))
        std::snprintf(buf, sizeof buf, " %7s", "-");
      else
        std::snprintf(buf, sizeof buf, " %7.2f", ord);
      o << buf;
    }
    o << "\n";
  }
  return o.str();
}

TduReport bench_tdu(const RunConfig& config) {
  Simulation sim(config);
  auto s = sim.run(false);
  if (s.steps <= 0) throw std::runtime_error("bench-tdu: the run took no steps");
  const int workers = config.execution == Execution::kParallel ? std::max(1, omp_get_max_threads()) : 1;
  const double elements = static_cast<double>(sim.solver().mesh().num_cells()) / workers;
  return tdu(s.wall_s, elements, s.steps, config.order, config.dim);
}

std::string tdu_csv(const TduReport& r) {
  std::ostringstream o;
  o << "wct_s,elements,steps,order,dim,tdu_us\n";
  o << format_double(r.wct_s) << "," << format_double(r.elements) << "," << r.steps << "," << r.order << "," << r.dim << ","
    << format_double(r.tdu_us) << "\n";
  return o.str();
}

}  // namespace aderdg
