#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "aderdg/kernels.hpp"

using namespace aderdg;

namespace {

std::vector<double> random_euler_block(const EulerSystem& sys, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rho(0.1, 3.0), vel(-2.0, 2.0), p(0.1, 5.0);
  const int m = sys.num_vars();
  std::vector<double> q(static_cast<std::size_t>(n) * m), v(m);
  for (int i = 0; i < n; ++i) {
    v[0] = rho(rng);
    for (int d = 0; d < sys.dims(); ++d) v[1 + d] = vel(rng);
    v[m - 1] = p(rng);
    sys.prim2cons(v, std::span<double>(q.data() + static_cast<std::size_t>(i) * m, m));
  }
  return q;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("AoS/SoA transposition") {
  SUBCASE("W=2, m=3") {
    const std::vector<double> aos{1, 2, 3, 4, 5, 6};  // a1 a2 a3 b1 b2 b3
    std::vector<double> soa(6), back(6);
    aos_to_soa(aos, 2, 3, soa);
    CHECK(soa == std::vector<double>{1, 4, 2, 5, 3, 6});
    soa_to_aos(soa, 2, 3, back);
    CHECK(back == aos);
  }
  SUBCASE("W=1 is the identity") {
    const std::vector<double> aos{1, 2, 3, 4};
    std::vector<double> soa(4);
    aos_to_soa(aos, 1, 4, soa);
    CHECK(soa == aos);
  }
  SUBCASE("round trip for all W, m up to 64") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int w = 1; w <= 64; w += 7)
      for (int m = 1; m <= 64; m += 9) {
        std::vector<double> aos(static_cast<std::size_t>(w) * m), soa(aos.size()), back(aos.size());
        for (auto& v : aos) v = uni(rng);
        aos_to_soa(aos, w, m, soa);
        soa_to_aos(soa, w, m, back);
        CHECK(bitwise_equal(aos, back));
      }
  }
}

TEST_CASE("batched evaluation equals the scalar loop bit for bit") {
  for (int dims : {1, 2, 3}) {
    EulerSystem sys(dims, 1.4);
    const int m = sys.num_vars();
    for (int width : {1, 4, 8, 13}) {
      const int n = 1000 + 3;  // ragged tail
      auto q = random_euler_block(sys, n, 17 + width);
      auto g = random_euler_block(sys, n, 99 + width);
      BatchEvaluator batched(sys, width, EvalMode::kBatched), scalar(sys, width, EvalMode::kScalar);
      for (int dir = 0; dir < dims; ++dir) {
        std::vector<double> a(q.size()), b(q.size());
        batched.flux(q.data(), n, dir, a.data());
        scalar.flux(q.data(), n, dir, b.data());
        CHECK(bitwise_equal(a, b));
        std::vector<double> sa(n), sb(n);
        batched.max_wave_speed(q.data(), n, dir, sa.data());
        scalar.max_wave_speed(q.data(), n, dir, sb.data());
        CHECK(bitwise_equal(sa, sb));
      }
      std::vector<double> a(q.size()), b(q.size());
      batched.primitive_quasilinear(q.data(), {g.data(), g.data(), g.data()}, n, a.data());
      scalar.primitive_quasilinear(q.data(), {g.data(), g.data(), g.data()}, n, b.data());
      CHECK(bitwise_equal(a, b));
    }
    (void)m;
  }
}

TEST_CASE("identical lanes give identical outputs; a NaN lane is isolated") {
  EulerSystem sys(2, 1.4);
  const int m = 4, n = 8;
  std::vector<double> q;
  for (int i = 0; i < n; ++i) q.insert(q.end(), {1.0, 0.2, -0.1, 2.5});
  BatchEvaluator eval(sys, 8);
  std::vector<double> f(q.size());
  eval.flux(q.data(), n, 0, f.data());
  for (int i = 1; i < n; ++i)
    for (int v = 0; v < m; ++v) CHECK(f[i * m + v] == f[v]);

  q[3 * m + 0] = NAN;
  std::vector<unsigned char> flags(n);
  CHECK_FALSE(eval.admissible(q.data(), n, flags));
  for (int i = 0; i < n; ++i) CHECK(flags[i] == (i == 3 ? 0 : 1));
  std::vector<double> g(q.size());
  eval.flux(q.data(), n, 0, g.data());
  for (int i = 0; i < n; ++i)
    if (i != 3)
      for (int v = 0; v < m; ++v) CHECK(g[i * m + v] == f[i * m + v]);
}

TEST_CASE("contract along each dimension") {
  const auto& t = basis_tables(2);
  TensorShape shape;
  shape.m = 2;
  shape.ndims = 3;
  shape.extent = {3, 3, 3, 1};
  std::vector<double> in(static_cast<std::size_t>(shape.size()));
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = std::sin(0.37 * i);
  for (int dir = 0; dir < 3; ++dir) {
    std::vector<double> out(in.size());
    contract(t.derivative, in, shape, dir, out);
    const int inner = shape.inner(dir), outer = shape.outer(dir);
    for (int o = 0; o < outer; ++o)
      for (int r = 0; r < 3; ++r)
        for (int i = 0; i < inner; ++i) {
          double s = 0.0;
          for (int c = 0; c < 3; ++c) s += t.derivative(r, c) * in[(o * 3 + c) * inner + i];
          CHECK(out[(o * 3 + r) * inner + i] == doctest::Approx(s).epsilon(1e-14));
        }
  }
}

TEST_CASE("contract commutes exactly with reflection") {
  // D(N-r, N-c) = -D(r, c), so reflecting the input reflects and negates the output.
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto& t = basis_tables(n);
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> uni(-1, 1);
    TensorShape shape;
    shape.m = 1;
    shape.ndims = 1;
    shape.extent[0] = n + 1;
    std::vector<double> in(n + 1), rev(n + 1), a(n + 1), b(n + 1);
    for (auto& v : in) v = uni(rng);
    for (int i = 0; i <= n; ++i) rev[i] = in[n - i];
    contract(t.derivative, in, shape, 0, a);
    contract(t.derivative, rev, shape, 0, b);
    for (int i = 0; i <= n; ++i) CHECK(b[i] == -a[n - i]);
  }
}

TEST_CASE("TDU metric") {
  auto r = tdu(10.0, 1000, 100, 3, 3);
  CHECK(r.tdu_us == doctest::Approx(1.5625));
  CHECK(tdu(10.0, 1000, 200, 3, 3).tdu_us == doctest::Approx(r.tdu_us / 2));
  CHECK(tdu(10.0, 2000, 100, 3, 3).tdu_us < r.tdu_us);
  CHECK(tdu(10.0, 1000, 100, 4, 3).tdu_us < r.tdu_us);
}
