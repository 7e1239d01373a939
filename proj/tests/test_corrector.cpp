#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "aderdg/corrector.hpp"
#include "test_systems.hpp"

using namespace aderdg;

namespace {

std::vector<double> random_euler(std::mt19937_64& rng, const EulerSystem& sys) {
  std::uniform_real_distribution<double> rho(0.1, 3.0), vel(-2.0, 2.0), p(0.1, 5.0);
  std::vector<double> v(sys.num_vars()), q(sys.num_vars());
  v[0] = rho(rng);
  for (int d = 0; d < sys.dims(); ++d) v[1 + d] = vel(rng);
  v.back() = p(rng);
  sys.prim2cons(v, q);
  return q;
}

std::vector<double> unit_vector(std::mt19937_64& rng, int dims) {
  std::normal_distribution<double> g;
  std::vector<double> n(dims);
  double s = 0.0;
  for (auto& v : n) {
    v = g(rng);
    s += v * v;
  }
  for (auto& v : n) v /= std::sqrt(s);
  return n;
}

}  // namespace

TEST_CASE("CFL time step") {
  CHECK(cfl_timestep({1, 1, 1}, {0.1, 0.1, 0.1}, 3, 0.1) == doctest::Approx(1.0 / 300.0));
  CHECK(cfl_timestep({2, 0, 0}, {0.5, 1, 1}, 1, 0.2) == doctest::Approx(0.05));
  CHECK(cfl_timestep({1, 2, 0}, {0.05, 0.05, 1}, 2, 0.1) == doctest::Approx(0.5 * cfl_timestep({1, 2, 0}, {0.1, 0.1, 1}, 2, 0.1)));
  CHECK(std::isinf(cfl_timestep({0, 0, 0}, {0.1, 0.1, 0.1}, 3, 0.1)));

  AdvectionSystem adv(1, {2, 0, 0});
  CartesianMesh mesh(1, {2, 1, 1}, {0, 0, 0}, {1, 1, 1});
  std::vector<double> u(2 * 4, 1.0);
  CHECK(compute_timestep(mesh, adv, 3, 0.2, u) == doctest::Approx(0.05));
}

TEST_CASE("Rusanov speed") {
  EulerSystem euler(3, 1.4);
  std::vector<double> rest{1, 0, 0, 0, 2.5};
  CHECK(rusanov_theta(euler, rest, rest, std::vector<double>{1, 0, 0}) == doctest::Approx(std::sqrt(1.4)));
  AdvectionSystem adv(1, {-3, 0, 0});
  CHECK(rusanov_theta(adv, std::vector<double>{1.0}, std::vector<double>{2.0}, std::vector<double>{1.0}) == 3.0);
  DiffuseElasticitySystem el;
  std::vector<double> solid{0.1, 0.2, 0.0, 0.3, 0.1, 1.0, 2, 1, 1};
  std::vector<double> void_side{0.1, 0.2, 0.0, 3e-4, 1e-4, 1e-3, 2, 1, 1};
  CHECK(rusanov_theta(el, solid, void_side, std::vector<double>{1, 0}) ==
        rusanov_theta(el, solid, solid, std::vector<double>{1, 0}));
}

TEST_CASE("path integral of B") {
  testsys::QuadraticNcp sys;
  const std::vector<double> n{1.0};
  SUBCASE("degenerate path returns B(q)") {
    std::vector<double> q{0.7, -1.2};
    auto b = path_integral_B(sys, q, q, n);
    CHECK(b[0] == doctest::Approx(0.49));
    CHECK(b[1] == doctest::Approx(0.7 * -1.2));
    CHECK(b[2] == doctest::Approx(1.44));
    CHECK(b[3] == doctest::Approx(3.0));
  }
  SUBCASE("quadratic entries integrate exactly") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uni(-2, 2);
    for (int i = 0; i < 100; ++i) {
      const double a0 = uni(rng), b0 = uni(rng), a1 = uni(rng), b1 = uni(rng);
      const double da = a1 - a0, db = b1 - b0;
      auto b = path_integral_B(sys, std::vector<double>{a0, b0}, std::vector<double>{a1, b1}, n);
      // Closed-form integrals over s in [0, 1] of the straight segment.
      CHECK(std::abs(b[0] - (a0 * a0 + a0 * a1 + a1 * a1) / 3.0) < 1e-14);
      CHECK(std::abs(b[1] - (a0 * b0 + (a0 * db + b0 * da) / 2.0 + da * db / 3.0)) < 1e-14);
      CHECK(std::abs(b[2] - (b0 * b0 + b0 * b1 + b1 * b1) / 3.0) < 1e-14);
      CHECK(std::abs(b[3] - 3.0) < 1e-14);
    }
  }
  SUBCASE("linear B in the elasticity system: constant-coefficient rows are exact") {
    DiffuseElasticitySystem el;
    std::vector<double> q{0.1, 0.2, 0.3, 0.5, 0.1, 1.0, 2, 1, 1};
    auto b = path_integral_B(el, q, q, std::vector<double>{1, 0});
    auto direct = ncp_matrix(el, q, std::vector<double>{1, 0});
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == doctest::Approx(direct[i]).epsilon(1e-15));
  }
}

TEST_CASE("fluctuation consistency D-(q, q) = F(q) . n") {
  std::mt19937_64 rng(21);
  for (int dims = 1; dims <= 3; ++dims) {
    EulerSystem sys(dims, 1.4);
    for (int i = 0; i < 200; ++i) {
      auto q = random_euler(rng, sys);
      auto n = unit_vector(rng, dims);
      auto d = riemann_Dminus(sys, q, q, n);
      std::vector<double> f(q.size());
      sys.flux_normal(q, n, f);
      for (std::size_t k = 0; k < q.size(); ++k) CHECK(std::abs(d[k] - f[k]) <= 1e-14 * (1 + std::abs(f[k])));
    }
  }
}

TEST_CASE("fluctuation special cases") {
  SUBCASE("flux-free system without B is pure dissipation") {
    testsys::ConstantSource sys(0.0, 1);  // max speed 1
    auto d = riemann_Dminus(sys, std::vector<double>{2.0}, std::vector<double>{5.0}, std::vector<double>{1.0});
    CHECK(d[0] == doctest::Approx(-1.5));
  }
  SUBCASE("advection takes the upwind state") {
    AdvectionSystem adv(1, {1.0, 0, 0});
    auto d = riemann_Dminus(adv, std::vector<double>{1.0}, std::vector<double>{0.0}, std::vector<double>{1.0});
    CHECK(d[0] == doctest::Approx(1.0));
    AdvectionSystem back(1, {-2.0, 0, 0});
    d = riemann_Dminus(back, std::vector<double>{1.0}, std::vector<double>{0.5}, std::vector<double>{1.0});
    CHECK(d[0] == doctest::Approx(-2.0 * 0.5));
  }
}

TEST_CASE("material parameters get no face dissipation") {
  DiffuseElasticitySystem el;
  std::vector<double> solid{0, 0, 0, 0, 0, 1.0, 2, 1, 1};
  std::vector<double> other{0, 0, 0, 0, 0, 1e-3, 3, 0.5, 2};
  auto d = riemann_Dminus(el, solid, other, std::vector<double>{1, 0});
  for (int v = DiffuseElasticitySystem::kAlpha; v < DiffuseElasticitySystem::kNumVars; ++v) CHECK(d[v] == 0.0);
}

TEST_CASE("volume and face accumulators") {
  const auto& t = basis_tables(2);
  SUBCASE("no flux, no B and no source give zero") {
    testsys::ConstantSource sys(0.0, 2);
    Corrector corr(sys, t);
    const auto& l = corr.layout();
    std::vector<double> q(static_cast<std::size_t>(l.nst), 1.3), acc(static_cast<std::size_t>(l.nsp), 7.0);
    corr.volume_integral(q, {0.1, 0.2, 1}, 0.01, acc);
    for (double v : acc) CHECK(v == 0.0);
  }
  SUBCASE("constant source is integrated exactly") {
    testsys::ConstantSource sys(3.0, 2);
    Corrector corr(sys, t);
    const auto& l = corr.layout();
    std::vector<double> q(static_cast<std::size_t>(l.nst), 1.3), acc(static_cast<std::size_t>(l.nsp));
    const double dt = 0.01;
    corr.volume_integral(q, {0.1, 0.2, 1}, dt, acc);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        CHECK(acc[j * 3 + i] == doctest::Approx(t.weights[i] * t.weights[j] * 3.0 * dt * 0.1 * 0.2).epsilon(1e-14));
  }
  SUBCASE("zero accumulators leave the solution unchanged") {
    EulerSystem sys(2, 1.4);
    Corrector corr(sys, t);
    const auto& l = corr.layout();
    std::vector<double> u(static_cast<std::size_t>(l.nsp) * l.m), zero(u.size(), 0.0), out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.01 * i;
    corr.element_update(u, zero, zero, {0.1, 0.1, 1}, out);
    CHECK(out == u);
  }
}

TEST_CASE("constant state: volume terms cancel face terms") {
  EulerSystem sys(2, 1.4);
  for (int n = 0; n <= 4; ++n) {
    const auto& t = basis_tables(n);
    Corrector corr(sys, t);
    const auto& l = corr.layout();
    std::vector<double> state{1.1, 0.3, -0.4, 2.9};
    std::vector<double> q(static_cast<std::size_t>(l.nst) * l.m);
    for (int p = 0; p < l.nst; ++p) std::copy(state.begin(), state.end(), q.begin() + p * l.m);
    const std::array<double, 3> dx{0.1, 0.2, 1};
    std::vector<double> vol(static_cast<std::size_t>(l.dims) * l.nsp * l.m), ns(static_cast<std::size_t>(l.nsp) * l.m);
    const bool has_ns = corr.volume_terms(q, dx, vol, ns);
    // Both face solves see the same state on either side.
    std::vector<double> trace(static_cast<std::size_t>(l.nface_st) * l.m), flux(trace.size());
    std::array<std::vector<double>, 6> g;
    for (int d = 0; d < 2; ++d) {
      for (int p = 0; p < l.nface_st; ++p) {
        std::copy(state.begin(), state.end(), trace.begin() + p * l.m);
        sys.flux(aos_view(state.data(), 1, 4), d, aos_view(flux.data() + p * l.m, 1, 4));
      }
      std::vector<double> lo(static_cast<std::size_t>(l.nface_sp) * l.m), up(lo.size());
      corr.face_flux(d, trace, flux, trace, flux, lo, up);
      g[2 * d] = up;      // the element's lower face is the upper side of that face
      g[2 * d + 1] = lo;
    }
    std::array<std::span<const double>, 6> faces;
    for (int f = 0; f < 4; ++f) faces[f] = g[f];
    std::vector<double> u(static_cast<std::size_t>(l.nsp) * l.m), out(u.size());
    for (int p = 0; p < l.nsp; ++p) std::copy(state.begin(), state.end(), u.begin() + p * l.m);
    corr.update(u, vol, ns, has_ns, faces, dx, 0.01, out);
    CAPTURE(n);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(out[i] - u[i]) <= 1e-14);
  }
}
