#pragma once

#include <array>
#include <string>

namespace aderdg {

enum class BoundaryType { kPeriodic, kOutflow, kWall, kExact };

BoundaryType parse_boundary(const std::string& name);
std::string to_string(BoundaryType bc);

/// Uniform Cartesian grid with cells numbered x-fastest.
struct CartesianMesh {
  int dims = 1;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
  std::array<double, 3> dx{1.0, 1.0, 1.0};
  /// bc[dir][side], side 0 = lower boundary.
  std::array<std::array<BoundaryType, 2>, 3> bc{};

  CartesianMesh() = default;
  CartesianMesh(int dims, std::array<int, 3> cells, std::array<double, 3> lo, std::array<double, 3> hi);

  int num_cells() const { return cells[0] * cells[1] * cells[2]; }
  double cell_volume() const { return dx[0] * dx[1] * dx[2]; }
  bool periodic(int dir) const { return bc[dir][0] == BoundaryType::kPeriodic; }

  int index(const std::array<int, 3>& c) const { return c[0] + cells[0] * (c[1] + cells[1] * c[2]); }
  std::array<int, 3> coords(int e) const {
    return {e % cells[0], (e / cells[0]) % cells[1], e / (cells[0] * cells[1])};
  }
  /// Lower corner of cell e.
  std::array<double, 3> origin(int e) const;

  /// Cell at integer offset `off` from e, with periodic wrap. Returns -1 if
  /// the target lies outside a non-periodic boundary.
  int offset(int e, const std::array<int, 3>& off) const;
  int neighbor(int e, int dir, int side) const;

  /// Faces normal to `dir`: (cells[dir] + 1) x (other cell counts), with the
  /// same x-fastest numbering as cells.
  std::array<int, 3> face_extent(int dir) const {
    std::array<int, 3> n = cells;
    n[dir] += 1;
    return n;
  }
  int num_faces(int dir) const {
    auto n = face_extent(dir);
    return n[0] * n[1] * n[2];
  }
  int face_index(int dir, const std::array<int, 3>& c) const {
    auto n = face_extent(dir);
    return c[0] + n[0] * (c[1] + n[1] * c[2]);
  }
  /// Face of cell e on `side` (0 lower, 1 upper) in direction dir.
  int cell_face(int e, int dir, int side) const {
    auto c = coords(e);
    c[dir] += side;
    return face_index(dir, c);
  }
};

}  // namespace aderdg
