#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "aderdg/pde.hpp"

using namespace aderdg;

namespace {

std::vector<double> flux_of(const PdeSystem& sys, const std::vector<double>& q, int dir) {
  std::vector<double> f(sys.num_vars());
  sys.flux(aos_view(q.data(), 1, sys.num_vars()), dir, aos_view(f.data(), 1, sys.num_vars()));
  return f;
}

std::vector<double> random_euler(std::mt19937_64& rng, const EulerSystem& sys) {
  std::uniform_real_distribution<double> rho(0.1, 3.0), vel(-2.0, 2.0), p(0.1, 5.0);
  std::vector<double> v(sys.num_vars()), q(sys.num_vars());
  v[0] = rho(rng);
  for (int d = 0; d < sys.dims(); ++d) v[1 + d] = vel(rng);
  v[sys.num_vars() - 1] = p(rng);
  sys.prim2cons(v, q);
  return q;
}

std::vector<double> sorted_spectrum(const PdeSystem& sys, const std::vector<double>& q, std::vector<double> n) {
  std::vector<double> ev(sys.num_vars());
  sys.eigenvalues(q, n, ev);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> elastic_state(double alpha) {
  // sxx, syy, sxy, alpha vx, alpha vy, alpha, lambda, mu, rho
  return {0.3, -0.2, 0.1, alpha * 0.5, alpha * -0.25, alpha, 2.0, 1.0, 1.0};
}

}  // namespace

TEST_CASE("Euler flux and pressure") {
  EulerSystem sys(3, 1.4);
  std::vector<double> rest{1, 0, 0, 0, 2.5};
  CHECK(sys.pressure(rest) == doctest::Approx(1.0));
  auto f = flux_of(sys, rest, 0);
  const std::vector<double> at_rest{0, 1, 0, 0, 0};
  for (int i = 0; i < 5; ++i) CHECK(f[i] == doctest::Approx(at_rest[i]).epsilon(1e-15));

  std::vector<double> moving{1, 1, 0, 0, 3.0};
  CHECK(sys.pressure(moving) == doctest::Approx(1.0));
  f = flux_of(sys, moving, 0);
  const std::vector<double> expect{1, 2, 0, 0, 4};
  for (int i = 0; i < 5; ++i) CHECK(f[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("Euler y-flux of a mirrored state mirrors the x-flux") {
  EulerSystem sys(2, 1.4);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto q = random_euler(rng, sys);
    std::vector<double> swapped{q[0], q[2], q[1], q[3]};
    auto fx = flux_of(sys, q, 0);
    auto fy = flux_of(sys, swapped, 1);
    CHECK(fy[0] == fx[0]);
    CHECK(fy[1] == fx[2]);
    CHECK(fy[2] == fx[1]);
    CHECK(fy[3] == fx[3]);
  }
}

TEST_CASE("Euler eigenvalues") {
  EulerSystem sys(3, 1.4);
  std::vector<double> rest{1, 0, 0, 0, 2.5};
  CHECK(sys.max_abs_eigenvalue(rest, std::vector<double>{1, 0, 0}) == doctest::Approx(std::sqrt(1.4)));
  auto ev = sorted_spectrum(sys, rest, {1, 0, 0});
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(-ev[ev.size() - 1 - i]));

  // Galilean shift.
  std::vector<double> v{1.0, 0.3, -0.2, 0.7, 1.0}, q(5);
  sys.prim2cons(v, q);
  auto base = sorted_spectrum(sys, q, {0.6, 0.8, 0});
  v[1] += 1.0;
  v[2] += 2.0;
  sys.prim2cons(v, q);
  auto shifted = sorted_spectrum(sys, q, {0.6, 0.8, 0});
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(shifted[i] == doctest::Approx(base[i] + 0.6 + 1.6));
}

TEST_CASE("Euler 2D: 90 degree rotation permutes flux and keeps the spectrum") {
  EulerSystem sys(2, 1.4);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto q = random_euler(rng, sys);
    std::vector<double> rot{q[0], -q[2], q[1], q[3]};  // velocity rotated by +90 degrees
    auto a = sorted_spectrum(sys, q, {1, 0});
    auto b = sorted_spectrum(sys, rot, {0, 1});
    for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
    auto fx = flux_of(sys, q, 0);
    auto fy = flux_of(sys, rot, 1);
    CHECK(fy[0] == doctest::Approx(fx[0]));
    CHECK(fy[2] == doctest::Approx(fx[1]));
    CHECK(fy[1] == doctest::Approx(-fx[2]));
    CHECK(fy[3] == doctest::Approx(fx[3]));
  }
}

TEST_CASE("Euler flux Jacobian is consistent with finite differences") {
  EulerSystem sys(2, 1.4);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    auto q = random_euler(rng, sys);
    std::vector<double> dq(4);
    for (auto& v : dq) v = g(rng);
    // (A . n) dq from flux linearization vs. central difference.
    const double eps = 1e-7;
    std::vector<double> qp(q), qm(q);
    for (int k = 0; k < 4; ++k) {
      qp[k] += eps * dq[k];
      qm[k] -= eps * dq[k];
    }
    std::vector<double> fwd(4);
    auto f0 = flux_of(sys, q, 0);
    auto f1 = flux_of(sys, qp, 0);
    auto central = flux_of(sys, qp, 0);
    auto fm = flux_of(sys, qm, 0);
    for (int k = 0; k < 4; ++k) {
      fwd[k] = (f1[k] - f0[k]) / eps;
      central[k] = (central[k] - fm[k]) / (2 * eps);
      CHECK(std::abs(fwd[k] - central[k]) <= 1e-6 * (1 + std::abs(central[k])));
    }
  }
}

TEST_CASE("Euler primitive conversion") {
  EulerSystem sys(3, 1.4);
  std::vector<double> v(5);
  sys.cons2prim(std::vector<double>{1, 0, 0, 0, 2.5}, v);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 0.0);
  CHECK(v[4] == doctest::Approx(1.0).epsilon(1e-15));
  sys.cons2prim(std::vector<double>{2, 2, 0, 0, 5}, v);
  CHECK(v[0] == 2.0);
  CHECK(v[1] == 1.0);
  CHECK(v[4] == doctest::Approx(1.6));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto q = random_euler(rng, sys);
    std::vector<double> back(5);
    sys.cons2prim(q, v);
    sys.prim2cons(v, back);
    for (int k = 0; k < 5; ++k) CHECK(back[k] == doctest::Approx(q[k]).epsilon(1e-14));
  }
}

TEST_CASE("Euler primitive quasi-linear form matches the conservative form") {
  // dQ/dt = -dF/dx  <=>  dV/dt = -A_V dV/dx; check with a chain-rule finite difference.
  EulerSystem sys(2, 1.4);
  std::vector<double> v{1.2, 0.4, -0.3, 0.9}, dv{0.1, -0.2, 0.3, 0.05};
  std::vector<double> out(4), zero(4, 0.0);
  GradientViews grad{aos_view(dv.data(), 1, 4), aos_view(zero.data(), 1, 4), aos_view(zero.data(), 1, 4)};
  sys.primitive_quasilinear(aos_view(v.data(), 1, 4), grad, aos_view(out.data(), 1, 4));
  const double eps = 1e-6;
  std::vector<double> vp(v), vm(v), qp(4), qm(4);
  for (int k = 0; k < 4; ++k) {
    vp[k] += eps * dv[k];
    vm[k] -= eps * dv[k];
  }
  sys.prim2cons(vp, qp);
  sys.prim2cons(vm, qm);
  auto fp = flux_of(sys, qp, 0), fm = flux_of(sys, qm, 0);
  std::vector<double> dF(4);
  for (int k = 0; k < 4; ++k) dF[k] = (fp[k] - fm[k]) / (2 * eps);  // dQ/dt = -dF
  // dV/dt = (dV/dQ)(-dF) must equal -out.
  std::vector<double> q(4), qs(4), vs(4);
  sys.prim2cons(v, q);
  for (int k = 0; k < 4; ++k) qs[k] = q[k] - eps * dF[k];
  sys.cons2prim(qs, vs);
  for (int k = 0; k < 4; ++k) CHECK((vs[k] - v[k]) / eps == doctest::Approx(-out[k]).epsilon(1e-5));
}

TEST_CASE("admissibility") {
  EulerSystem sys(3, 1.4);
  CHECK(sys.admissible(std::vector<double>{1, 0, 0, 0, 2.5}));
  CHECK_FALSE(sys.admissible(std::vector<double>{-1, 0, 0, 0, 2.5}));
  CHECK_FALSE(sys.admissible(std::vector<double>{1, 0, 0, 0, 0.0}));
  CHECK_FALSE(sys.admissible(std::vector<double>{1, NAN, 0, 0, 2.5}));
  AdvectionSystem adv(1, {1, 0, 0});
  CHECK(adv.admissible(std::vector<double>{3.0}));
  CHECK_FALSE(adv.admissible(std::vector<double>{INFINITY}));
  DiffuseElasticitySystem el;
  auto s = elastic_state(1.0);
  CHECK(el.admissible(s));
  s[2] = NAN;
  CHECK_FALSE(el.admissible(s));
}

TEST_CASE("advection system") {
  AdvectionSystem adv(1, {1, 0, 0});
  CHECK(flux_of(adv, {2.0}, 0)[0] == 2.0);
  CHECK(flux_of(adv, {0.0}, 0)[0] == 0.0);
  const double r = 1 / std::sqrt(2.0);
  AdvectionSystem diag(2, {r, r, 0});
  CHECK(diag.max_abs_eigenvalue(std::vector<double>{1.0}, std::vector<double>{1, 0}) == doctest::Approx(r));
}

TEST_CASE("diffuse-interface elasticity") {
  DiffuseElasticitySystem sys(1e-3);
  const int m = sys.num_vars();

  SUBCASE("zero gradient gives zero output") {
    auto q = elastic_state(0.7);
    std::vector<double> zero(m, 0.0), out(m, 1.0);
    GradientViews grad{aos_view(zero.data(), 1, m), aos_view(zero.data(), 1, m), aos_view(zero.data(), 1, m)};
    sys.ncp(aos_view(q.data(), 1, m), grad, aos_view(out.data(), 1, m));
    for (double v : out) CHECK(v == 0.0);
  }
  SUBCASE("material rows of B vanish") {
    auto q = elastic_state(0.4);
    for (auto n : {std::vector<double>{1, 0}, std::vector<double>{0, 1}, std::vector<double>{0.6, 0.8}}) {
      auto b = ncp_matrix(sys, q, n);
      for (int row : {5, 6, 7, 8})
        for (int c = 0; c < m; ++c) CHECK(b[row * m + c] == 0.0);
    }
  }
  SUBCASE("uniform alpha recovers classical elasticity") {
    // With grad(alpha) = 0 and alpha = 1 the velocity rows are -(1/rho) div sigma
    // and the stress rows follow Hooke's law.
    auto q = elastic_state(1.0);
    auto b = ncp_matrix(sys, q, std::vector<double>{1, 0});
    // d/dt (alpha vx) + B . grad = 0 => B(vx, sxx) = -1/rho
    CHECK(b[3 * m + 0] == doctest::Approx(-1.0));
    // d/dt sxx: B(sxx, vx) = -(lambda + 2 mu)
    CHECK(b[0 * m + 3] == doctest::Approx(-4.0));
    CHECK(b[1 * m + 3] == doctest::Approx(-2.0));
  }
  SUBCASE("wave speeds") {
    auto q = elastic_state(1.0);
    CHECK(sys.max_abs_eigenvalue(q, std::vector<double>{1, 0}) == doctest::Approx(2.0));
    CHECK(sys.max_abs_eigenvalue(q, std::vector<double>{0.6, 0.8}) == doctest::Approx(2.0));
    auto ev = sorted_spectrum(sys, q, {1, 0});
    CHECK(ev.front() == doctest::Approx(-2.0));
    CHECK(ev.back() == doctest::Approx(2.0));
    std::vector<double> shear(q);
    shear[7] = 0.0;  // mu = 0
    auto ac = sorted_spectrum(sys, shear, {1, 0});
    CHECK(std::count_if(ac.begin(), ac.end(), [](double v) { return v == 0.0; }) >= 7);
  }
  SUBCASE("spectrum is independent of alpha") {
    for (double alpha : {0.01, 0.5, 1e-3, 0.0}) {
      for (auto n : {std::vector<double>{1, 0}, std::vector<double>{0, 1}, std::vector<double>{0.6, 0.8}}) {
        auto a = sorted_spectrum(sys, elastic_state(1.0), n);
        auto b = sorted_spectrum(sys, elastic_state(alpha), n);
        CHECK(a == b);
      }
    }
  }
  SUBCASE("alpha clamp") {
    CHECK(sys.clamped_alpha(1.0) == 1.0);
    CHECK(sys.clamped_alpha(2e-3) == 2e-3);
    CHECK(sys.clamped_alpha(0.0) == 1e-3);
    CHECK(sys.clamped_alpha(-1.0) == 1e-3);
    double prev = sys.clamped_alpha(0.0);
    for (int i = 1; i <= 100; ++i) {
      const double v = sys.clamped_alpha(2e-3 * i / 100);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("system factory") {
  CHECK(make_system("euler", 2, 1.4, {1, 0, 0})->num_vars() == 4);
  CHECK(make_system("advection", 3, 1.4, {1, 0, 0})->num_vars() == 1);
  CHECK(make_system("elasticity-di", 2, 1.4, {1, 0, 0})->num_vars() == 9);
  CHECK_THROWS(make_system("mhd", 2, 1.4, {1, 0, 0}));
}
