#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aderdg/mesh.hpp"
#include "aderdg/pde.hpp"

namespace aderdg {

/// q(x, t) in conserved variables.
using StateFunction = std::function<void(const std::array<double, 3>& x, double t, std::span<double> q)>;

struct ProblemParams {
  std::string name = "constant";
  std::vector<double> state;  // constant state, primitive variables
  double amplitude = -1.0;    // < 0 selects the problem default
  double offset = 1.0;
  double wavenumber = 1.0;
  double strength = 5.0;      // vortex
  double position = -1.0;     // discontinuity / interface; < 0 selects the default
  double energy = 0.979264;   // blast
  double ambient_pressure = 1e-14;
  double pulse_center = 0.5;
  double pulse_width = 0.1;
  double interface_width = 1.0;  // pwave: alpha transition width in cells, 0 = sharp
  double lambda = 2.0;
  double mu = 1.0;
  double rho = 1.0;
  double left = 1.0;   // step
  double right = 0.0;

  bool operator==(const ProblemParams&) const = default;
};

struct Problem {
  std::string name;
  StateFunction initial;
  StateFunction exact;  // empty when no closed form is available
};

/// Known names: constant, sine, vortex, sod, sedov, pwave, step.
Problem make_problem(const ProblemParams& params, const PdeSystem& system, const CartesianMesh& mesh,
                     std::array<double, 3> velocity);

bool is_known_problem(const std::string& name);

/// Isentropic vortex of strength eps on a periodic box centred in the domain,
/// advected with the free stream (1, 1); exact at any time via the nearest
/// periodic image.
void isentropic_vortex(const EulerSystem& sys, const CartesianMesh& mesh, double eps, const std::array<double, 3>& x,
                       double t, std::span<double> q);

}  // namespace aderdg
