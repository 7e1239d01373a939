#include "aderdg/mesh.hpp"

#include <stdexcept>

namespace aderdg {

BoundaryType parse_boundary(const std::string& name) {
  if (name == "periodic") return BoundaryType::kPeriodic;
  if (name == "outflow") return BoundaryType::kOutflow;
  if (name == "wall") return BoundaryType::kWall;
  if (name == "exact") return BoundaryType::kExact;
  throw std::invalid_argument("unknown boundary type '" + name + "'");
}

std::string to_string(BoundaryType bc) {
  switch (bc) {
    case BoundaryType::kPeriodic: return "periodic";
    case BoundaryType::kOutflow: return "outflow";
    case BoundaryType::kWall: return "wall";
    case BoundaryType::kExact: return "exact";
  }
  return "periodic";
}

CartesianMesh::CartesianMesh(int dims_, std::array<int, 3> cells_, std::array<double, 3> lo_, std::array<double, 3> hi_)
    : dims(dims_), lo(lo_), hi(hi_) {
  if (dims < 1 || dims > 3) throw std::invalid_argument("mesh dimension must be 1, 2 or 3");
  for (int d = 0; d < 3; ++d) {
    cells[d] = d < dims ? cells_[d] : 1;
    if (d >= dims) {
      lo[d] = 0.0;
      hi[d] = 1.0;
    }
    if (cells[d] < 1) throw std::invalid_argument("cell counts must be >= 1");
    if (!(hi[d] > lo[d])) throw std::invalid_argument("domain_max must exceed domain_min");
    dx[d] = (hi[d] - lo[d]) / cells[d];
    bc[d] = {BoundaryType::kPeriodic, BoundaryType::kPeriodic};
  }
}

std::array<double, 3> CartesianMesh::origin(int e) const {
  auto c = coords(e);
  return {lo[0] + c[0] * dx[0], lo[1] + c[1] * dx[1], lo[2] + c[2] * dx[2]};
}

int CartesianMesh::offset(int e, const std::array<int, 3>& off) const {
  auto c = coords(e);
  for (int d = 0; d < 3; ++d) {
    c[d] += off[d];
    if (c[d] < 0 || c[d] >= cells[d]) {
      if (d >= dims || !periodic(d)) return -1;
      c[d] = ((c[d] % cells[d]) + cells[d]) % cells[d];
    }
  }
  return index(c);
}

int CartesianMesh::neighbor(int e, int dir, int side) const {
  std::array<int, 3> off{0, 0, 0};
  off[dir] = side == 0 ? -1 : 1;
  return offset(e, off);
}

}  // namespace aderdg
