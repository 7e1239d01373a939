#include "aderdg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aderdg {

namespace {

double wrap(double x, double length) {
  x = std::fmod(x, length);
  if (x < -0.5 * length) x += length;
  if (x >= 0.5 * length) x -= length;
  return x;
}

// Phase 2 pi k sum_d (x_d - lo_d - a_d t) / L_d.
double phase(const CartesianMesh& mesh, double k, const std::array<double, 3>& a, const std::array<double, 3>& x, double t) {
  double s = 0.0;
  for (int d = 0; d < mesh.dims; ++d) s += (x[d] - mesh.lo[d] - a[d] * t) / (mesh.hi[d] - mesh.lo[d]);
  return 2.0 * std::numbers::pi * k * s;
}

double periodic_coordinate(const CartesianMesh& mesh, int d, double x) {
  const double len = mesh.hi[d] - mesh.lo[d];
  double r = std::fmod(x - mesh.lo[d], len);
  if (r < 0.0) r += len;
  return mesh.lo[d] + r;
}

}  // namespace

bool is_known_problem(const std::string& name) {
  for (const char* n : {"constant", "sine", "vortex", "sod", "sedov", "pwave", "step"})
    if (name == n) return true;
  return false;
}

void isentropic_vortex(const EulerSystem& sys, const CartesianMesh& mesh, double eps, const std::array<double, 3>& x,
                       double t, std::span<double> q) {
  const double g = sys.gamma();
  const double pi = std::numbers::pi;
  const double rx = wrap(x[0] - 0.5 * (mesh.lo[0] + mesh.hi[0]) - t, mesh.hi[0] - mesh.lo[0]);
  const double ry = wrap(x[1] - 0.5 * (mesh.lo[1] + mesh.hi[1]) - t, mesh.hi[1] - mesh.lo[1]);
  const double r2 = rx * rx + ry * ry;
  const double e = std::exp(0.5 * (1.0 - r2));
  const double du = -eps / (2.0 * pi) * e * ry;
  const double dv = eps / (2.0 * pi) * e * rx;
  const double temp = 1.0 - (g - 1.0) * eps * eps / (8.0 * g * pi * pi) * e * e;
  const double rho = std::pow(temp, 1.0 / (g - 1.0));
  std::vector<double> v(sys.num_vars(), 0.0);
  v[0] = rho;
  v[1] = 1.0 + du;
  v[2] = 1.0 + dv;
  v[sys.num_vars() - 1] = rho * temp;
  sys.prim2cons(v, q);
}

Problem make_problem(const ProblemParams& p, const PdeSystem& system, const CartesianMesh& mesh,
                     std::array<double, 3> velocity) {
  const int m = system.num_vars();
  const PdeSystem* sys = &system;
  const auto* euler = dynamic_cast<const EulerSystem*>(&system);
  const auto* elastic = dynamic_cast<const DiffuseElasticitySystem*>(&system);
  Problem prob;
  prob.name = p.name;

  if (p.name == "constant") {
    std::vector<double> prim = p.state;
    if (prim.empty()) {
      prim.assign(m, 0.0);
      if (euler) {
        prim[0] = 1.0;
        for (int d = 0; d < system.dims(); ++d) prim[1 + d] = velocity[d];
        prim[m - 1] = 1.0;
      } else if (elastic) {
        prim = {0.1, -0.2, 0.05, 0.3, -0.1, 1.0, 2.0, 1.0, 1.0};
      } else {
        prim[0] = 1.0;
      }
    }
    if (static_cast<int>(prim.size()) != m) throw std::invalid_argument("ic_state must have one entry per quantity");
    std::vector<double> cons(m);
    system.prim2cons(prim, cons);
    prob.initial = [cons](const std::array<double, 3>&, double, std::span<double> q) {
      std::copy(cons.begin(), cons.end(), q.begin());
    };
    prob.exact = prob.initial;
    return prob;
  }

  if (p.name == "sine") {
    if (elastic) throw std::invalid_argument("initial_condition 'sine' needs advection or euler");
    const double amp = p.amplitude < 0.0 ? (euler ? 0.2 : 0.5) : p.amplitude;
    const double off = p.offset;
    const double k = p.wavenumber;
    std::array<double, 3> a = velocity;
    if (auto* adv = dynamic_cast<const AdvectionSystem*>(&system)) a = adv->velocity();
    prob.exact = [=, &mesh](const std::array<double, 3>& x, double t, std::span<double> q) {
      const double s = off + amp * std::sin(phase(mesh, k, a, x, t));
      if (!euler) {
        q[0] = s;
        return;
      }
      std::vector<double> v(m, 0.0);
      v[0] = s;
      for (int d = 0; d < sys->dims(); ++d) v[1 + d] = a[d];
      v[m - 1] = 1.0;
      sys->prim2cons(v, q);
    };
    prob.initial = [f = prob.exact](const std::array<double, 3>& x, double, std::span<double> q) { f(x, 0.0, q); };
    return prob;
  }

  if (p.name == "vortex") {
    if (!euler || system.dims() != 2) throw std::invalid_argument("initial_condition 'vortex' needs 2D euler");
    const double eps = p.strength;
    prob.exact = [=, &mesh](const std::array<double, 3>& x, double t, std::span<double> q) {
      isentropic_vortex(*euler, mesh, eps, x, t, q);
    };
    prob.initial = [f = prob.exact](const std::array<double, 3>& x, double, std::span<double> q) { f(x, 0.0, q); };
    return prob;
  }

  if (p.name == "sod") {
    if (!euler) throw std::invalid_argument("initial_condition 'sod' needs euler");
    const double x0 = p.position < 0.0 ? 0.5 * (mesh.lo[0] + mesh.hi[0]) : p.position;
    prob.initial = [=](const std::array<double, 3>& x, double, std::span<double> q) {
      std::vector<double> v(m, 0.0);
      const bool left = x[0] < x0;
      v[0] = left ? 1.0 : 0.125;
      v[m - 1] = left ? 1.0 : 0.1;
      sys->prim2cons(v, q);
    };
    return prob;
  }

  if (p.name == "sedov") {
    if (!euler) throw std::invalid_argument("initial_condition 'sedov' needs euler");
    // Energy goes into the 2^d cells touching the domain centre.
    double volume = 1.0;
    for (int d = 0; d < system.dims(); ++d) volume *= 2.0 * mesh.dx[d];
    const double p_in = (euler->gamma() - 1.0) * p.energy / volume;
    const double p_out = p.ambient_pressure;
    prob.initial = [=, &mesh](const std::array<double, 3>& x, double, std::span<double> q) {
      bool inside = true;
      for (int d = 0; d < sys->dims(); ++d)
        inside = inside && std::abs(x[d] - 0.5 * (mesh.lo[d] + mesh.hi[d])) < mesh.dx[d];
      std::vector<double> v(m, 0.0);
      v[0] = 1.0;
      v[m - 1] = inside ? p_in : p_out;
      sys->prim2cons(v, q);
    };
    return prob;
  }

  if (p.name == "pwave") {
    if (!elastic) throw std::invalid_argument("initial_condition 'pwave' needs elasticity-di");
    const double xi = p.position < 0.0 ? 0.5 * (mesh.lo[0] + mesh.hi[0]) : p.position;
    const double lam = p.lambda, mu = p.mu, rho = p.rho;
    const double cp = std::sqrt((lam + 2.0 * mu) / rho);
    const double amp = p.amplitude < 0.0 ? 1.0 : p.amplitude;
    const double x0 = p.pulse_center, w = p.pulse_width;
    const double amin = elastic->alpha_min();
    const double width = p.interface_width * mesh.dx[0];
    using E = DiffuseElasticitySystem;
    prob.initial = [=](const std::array<double, 3>& x, double, std::span<double> q) {
      // tanh transition over `width`; a sharp jump when width is zero.
      const double alpha =
          width > 0.0 ? amin + (1.0 - amin) * 0.5 * (1.0 - std::tanh((x[0] - xi) / width)) : (x[0] < xi ? 1.0 : amin);
      const double s = (x[0] - x0) / w;
      const double v = x[0] < xi ? amp * std::exp(-s * s) : 0.0;
      q[E::kSxx] = -rho * cp * v;
      q[E::kSyy] = -(lam / cp) * v;
      q[E::kSxy] = 0.0;
      q[E::kVx] = alpha * v;
      q[E::kVy] = 0.0;
      q[E::kAlpha] = alpha;
      q[E::kLambda] = lam;
      q[E::kMu] = mu;
      q[E::kRho] = rho;
    };
    return prob;
  }

  if (p.name == "step") {
    const double x0 = p.position < 0.0 ? 0.5 * (mesh.lo[0] + mesh.hi[0]) : p.position;
    const double lv = p.left, rv = p.right;
    std::array<double, 3> a = velocity;
    if (auto* adv = dynamic_cast<const AdvectionSystem*>(&system)) a = adv->velocity();
    prob.exact = [=, &mesh](const std::array<double, 3>& x, double t, std::span<double> q) {
      const double xs = periodic_coordinate(mesh, 0, x[0] - a[0] * t);
      const double s = xs < x0 ? lv : rv;
      if (!euler) {
        q[0] = s;
        for (int v = 1; v < m; ++v) q[v] = 0.0;
        return;
      }
      std::vector<double> v(m, 0.0);
      v[0] = s;
      for (int d = 0; d < sys->dims(); ++d) v[1 + d] = a[d];
      v[m - 1] = 1.0;
      sys->prim2cons(v, q);
    };
    prob.initial = [f = prob.exact](const std::array<double, 3>& x, double, std::span<double> q) { f(x, 0.0, q); };
    return prob;
  }

  throw std::invalid_argument("unknown initial_condition '" + p.name + "'");
}

}  // namespace aderdg
