#include "aderdg/output.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace aderdg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field_filename(const std::string& prefix, long step, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06ld.", step);
  return prefix + buf + ext;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

void check(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void write_fields_csv(const Solver& solver, const std::string& path) {
  auto f = open_or_throw(path);
  const auto names = solver.system().quantity_names();
  const int m = solver.layout().m;
  f << "x,y,z,t";
  for (const auto& n : names) f << "," << n;
  f << "\n";
  const std::string t = format_double(solver.state().time);
  for (int e = 0; e < solver.mesh().num_cells(); ++e) {
    auto u = solver.cell(e);
    for (int p = 0; p < solver.layout().nsp; ++p) {
      auto x = solver.node_position(e, p);
      f << format_double(x[0]) << "," << format_double(x[1]) << "," << format_double(x[2]) << "," << t;
      for (int v = 0; v < m; ++v) f << "," << format_double(u[static_cast<std::size_t>(p) * m + v]);
      f << "\n";
    }
  }
  check(f, path);
}

void write_fields_vtk(const Solver& solver, const std::string& path) {
  auto f = open_or_throw(path);
  const auto& mesh = solver.mesh();
  const auto names = solver.system().quantity_names();
  const int m = solver.layout().m;
  const int nsp = solver.layout().nsp;
  const auto& tables = solver.tables();
  f << "# vtk DataFile Version 3.0\n";
  f << "ader-dg t=" << format_double(solver.state().time) << " step=" << solver.state().step << "\n";
  f << "ASCII\nDATASET STRUCTURED_POINTS\n";
  f << "DIMENSIONS " << mesh.cells[0] + 1 << " " << (mesh.dims > 1 ? mesh.cells[1] + 1 : 1) << " "
    << (mesh.dims > 2 ? mesh.cells[2] + 1 : 1) << "\n";
  f << "ORIGIN " << format_double(mesh.lo[0]) << " " << format_double(mesh.dims > 1 ? mesh.lo[1] : 0.0) << " "
    << format_double(mesh.dims > 2 ? mesh.lo[2] : 0.0) << "\n";
  f << "SPACING " << format_double(mesh.dx[0]) << " " << format_double(mesh.dx[1]) << " " << format_double(mesh.dx[2])
    << "\n";
  f << "CELL_DATA " << mesh.num_cells() << "\n";
  std::vector<double> w(nsp, 1.0);
  for (int p = 0; p < nsp; ++p) {
    int rest = p;
    for (int d = 0; d < mesh.dims; ++d) {
      w[p] *= tables.weights[rest % tables.nodes.size()];
      rest /= static_cast<int>(tables.nodes.size());
    }
  }
  for (int v = 0; v < m; ++v) {
    f << "SCALARS " << names[v] << " double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < mesh.num_cells(); ++e) {
      auto u = solver.cell(e);
      double avg = 0.0;
      for (int p = 0; p < nsp; ++p) avg += w[p] * u[static_cast<std::size_t>(p) * m + v];
      f << format_double(avg) << "\n";
    }
  }
  check(f, path);
}

std::string write_fields(const Solver& solver, const std::string& format, const std::string& dir,
                         const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string ext = format == "vtk" ? "vtk" : "csv";
  const std::string path = (std::filesystem::path(dir) / field_filename(prefix, solver.state().step, ext)).string();
  if (format == "vtk")
    write_fields_vtk(solver, path);
  else
    write_fields_csv(solver, path);
  return path;
}

std::vector<std::vector<double>> read_fields_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(f, line);
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) row.push_back(std::stod(item));
    rows.push_back(std::move(row));
  }
  return rows;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path, const std::vector<std::string>& quantities)
    : path_(path), out_(open_or_throw(path)) {
  out_ << "step,time,dt";
  for (const auto& q : quantities) out_ << "," << q;
  out_ << ",limited_fraction\n";
  check(out_, path_);
}

void DiagnosticsWriter::write(const Solver& solver) {
  const auto& s = solver.state();
  out_ << s.step << "," << format_double(s.time) << "," << format_double(s.last.dt);
  for (double t : solver.totals()) out_ << "," << format_double(t);
  out_ << "," << format_double(solver.limited_fraction()) << "\n";
  check(out_, path_);
}

}  // namespace aderdg
