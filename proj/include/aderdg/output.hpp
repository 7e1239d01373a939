#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "aderdg/solver.hpp"

namespace aderdg {

/// `<prefix>_<step:06>.<ext>`.
std::string field_filename(const std::string& prefix, long step, const std::string& ext);

/// One row per spatial quadrature node: x,y,z,t then every quantity, 17 significant digits.
void write_fields_csv(const Solver& solver, const std::string& path);
/// Legacy ASCII STRUCTURED_POINTS with one cell-average scalar per quantity.
void write_fields_vtk(const Solver& solver, const std::string& path);
/// Writes `<dir>/<prefix>_<step>.<csv|vtk>` and returns the path.
std::string write_fields(const Solver& solver, const std::string& format, const std::string& dir,
                         const std::string& prefix);

/// Nodal CSV reader (header skipped), for round-trip checks.
std::vector<std::vector<double>> read_fields_csv(const std::string& path);

/// Per-step diagnostics: step,time,dt,<quantity totals>,limited_fraction.
class DiagnosticsWriter {
 public:
  DiagnosticsWriter(const std::string& path, const std::vector<std::string>& quantities);
  void write(const Solver& solver);

 private:
  std::string path_;
  std::ofstream out_;
};

std::string format_double(double v);

}  // namespace aderdg
