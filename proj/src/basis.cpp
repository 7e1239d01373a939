#include "aderdg/basis.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aderdg {

namespace {

using Real = long double;
using RealMatrix = std::vector<std::vector<Real>>;

RealMatrix zeros(int rows, int cols) { return RealMatrix(rows, std::vector<Real>(cols, 0.0L)); }

// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
std::pair<Real, Real> legendre(int n, Real x) {
  Real p0 = 1.0L;
  Real p1 = x;
  if (n == 0) return {1.0L, 0.0L};
  for (int k = 2; k <= n; ++k) {
    Real pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  Real dp = n * (x * p1 - p0) / (x * x - 1.0L);
  return {p1, dp};
}

struct RealRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

RealRule gauss_legendre_real(int order) {
  const int n = order + 1;
  RealRule rule{std::vector<Real>(n), std::vector<Real>(n)};
  const Real pi = std::numbers::pi_v<Real>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    if (2 * i + 1 == n) {
      x = 0.0L;
    } else {
      for (int it = 0; it < 100; ++it) {
        auto [p, dp] = legendre(n, x);
        Real dx = p / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
    }
    Real w = 1.0L;  // midpoint rule for n == 1
    if (n > 1) {
      auto [p, dp] = legendre(n, x);
      (void)p;
      w = 1.0L / ((1.0L - x * x) * dp * dp);
    }
    rule.nodes[i] = (1.0L - x) / 2.0L;
    rule.nodes[n - 1 - i] = (1.0L + x) / 2.0L;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<Real> barycentric_weights(const std::vector<Real>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<Real> b(n, 1.0L);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      if (m != j) b[j] /= (x[j] - x[m]);
  return b;
}

Real lagrange_real(const std::vector<Real>& x, int k, Real xi) {
  Real v = 1.0L;
  for (std::size_t m = 0; m < x.size(); ++m)
    if (static_cast<int>(m) != k) v *= (xi - x[m]) / (x[k] - x[m]);
  return v;
}

RealMatrix derivative_real(const std::vector<Real>& x) {
  const int n = static_cast<int>(x.size());
  auto b = barycentric_weights(x);
  RealMatrix d = zeros(n, n);
  for (int k = 0; k < n; ++k) {
    Real diag = 0.0L;
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      d[k][l] = (b[l] / b[k]) / (x[k] - x[l]);
      diag -= d[k][l];
    }
    d[k][k] = diag;
  }
  return d;
}

// Solves A x = rhs (column-wise) by Gaussian elimination with partial pivoting.
RealMatrix solve(RealMatrix a, RealMatrix rhs) {
  const int n = static_cast<int>(a.size());
  const int m = n == 0 ? 0 : static_cast<int>(rhs[0].size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(rhs[c], rhs[piv]);
    if (a[c][c] == 0.0L) throw std::runtime_error("singular matrix in basis construction");
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      Real f = a[r][c] / a[c][c];
      if (f == 0.0L) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      for (int k = 0; k < m; ++k) rhs[r][k] -= f * rhs[c][k];
    }
  }
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < m; ++k) rhs[r][k] /= a[r][r];
  return rhs;
}

struct RealSubcell {
  RealMatrix projection;
  RealMatrix recovery;
};

RealSubcell subcell_real(const RealRule& rule) {
  const int n1 = static_cast<int>(rule.nodes.size());
  const int order = n1 - 1;
  const int ns = 2 * order + 1;
  const Real h = 1.0L / ns;

  RealMatrix p = zeros(ns, n1);
  for (int s = 0; s < ns; ++s)
    for (int k = 0; k < n1; ++k) {
      Real acc = 0.0L;
      for (int q = 0; q < n1; ++q)
        acc += rule.weights[q] * lagrange_real(rule.nodes, k, (s + rule.nodes[q]) * h);
      p[s][k] = acc;
    }

  // Constrained least squares: min |P u - a|^2 s.t. sum_k w_k u_k = h sum_s a_s.
  // The last coefficient is eliminated through the constraint.
  RealMatrix r = zeros(n1, ns);
  const int free = order;
  const Real w_last = rule.weights[order];
  if (free == 0) {
    for (int s = 0; s < ns; ++s) r[0][s] = h / w_last;
    return {p, r};
  }
  RealMatrix a = zeros(ns, free);
  for (int s = 0; s < ns; ++s)
    for (int k = 0; k < free; ++k) a[s][k] = p[s][k] - p[s][order] * rule.weights[k] / w_last;
  RealMatrix normal = zeros(free, free);
  for (int i = 0; i < free; ++i)
    for (int j = 0; j < free; ++j)
      for (int s = 0; s < ns; ++s) normal[i][j] += a[s][i] * a[s][j];
  // Right-hand sides for every unit vector of subcell averages at once.
  RealMatrix rhs = zeros(free, ns);
  for (int col = 0; col < ns; ++col)
    for (int i = 0; i < free; ++i) {
      Real acc = 0.0L;
      for (int s = 0; s < ns; ++s) {
        Real target = (s == col ? 1.0L : 0.0L) - p[s][order] * h / w_last;
        acc += a[s][i] * target;
      }
      rhs[i][col] = acc;
    }
  RealMatrix sol = solve(normal, rhs);
  for (int col = 0; col < ns; ++col) {
    Real constrained = h;
    for (int k = 0; k < free; ++k) {
      r[k][col] = sol[k][col];
      constrained -= rule.weights[k] * sol[k][col];
    }
    r[order][col] = constrained / w_last;
  }
  return {p, r};
}

Matrix to_matrix(const RealMatrix& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  Matrix out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = static_cast<double>(m[r][c]);
  return out;
}

// Enforces the reflection symmetry of the reference interval exactly:
// A(R-1-r, C-1-c) = sign * A(r, c). Mirrored data then produce bitwise
// mirrored results in the pairwise contractions.
void symmetrize(Matrix& a, double sign) {
  const int rows = a.rows();
  const int cols = a.cols();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int rr = rows - 1 - r;
      int cc = cols - 1 - c;
      if (rr * cols + cc < r * cols + c) continue;
      if (rr == r && cc == c) {
        if (sign < 0) a(r, c) = 0.0;
        continue;
      }
      double avg = 0.5 * (a(r, c) + sign * a(rr, cc));
      a(r, c) = avg;
      a(rr, cc) = sign * avg;
    }
}

}  // namespace

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimension mismatch");
  Matrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < rhs.cols_; ++c) {
      double acc = 0.0;
      for (int k = 0; k < cols_; ++k) acc += (*this)(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  return out;
}

QuadratureRule gauss_legendre(int order) {
  if (order < 0) throw std::invalid_argument("gauss_legendre: order must be >= 0");
  RealRule rule = gauss_legendre_real(order);
  QuadratureRule out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes.push_back(static_cast<double>(rule.nodes[i]));
    out.weights.push_back(static_cast<double>(rule.weights[i]));
  }
  return out;
}

Matrix derivative_matrix(std::span<const double> nodes, std::span<const double> weights, double h) {
  if (nodes.size() != weights.size()) throw std::invalid_argument("derivative_matrix: size mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("derivative_matrix: h must be positive");
  std::vector<Real> x(nodes.begin(), nodes.end());
  RealMatrix d = derivative_real(x);
  Matrix out(static_cast<int>(x.size()), static_cast<int>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t l = 0; l < x.size(); ++l) out(k, l) = static_cast<double>(d[k][l] / h);
  return out;
}

SubcellMatrices subcell_matrices(int order) {
  if (order < 0) throw std::invalid_argument("subcell_matrices: order must be >= 0");
  RealSubcell s = subcell_real(gauss_legendre_real(order));
  return {to_matrix(s.projection), to_matrix(s.recovery)};
}

double lagrange(std::span<const double> nodes, int k, double x) {
  double v = 1.0;
  for (std::size_t m = 0; m < nodes.size(); ++m)
    if (static_cast<int>(m) != k) v *= (x - nodes[m]) / (nodes[k] - nodes[m]);
  return v;
}

BasisTables build_basis_tables(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("basis order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  const int n1 = order + 1;
  const int ns = 2 * order + 1;
  RealRule rule = gauss_legendre_real(order);
  RealMatrix d = derivative_real(rule.nodes);
  RealSubcell sub = subcell_real(rule);

  BasisTables t;
  t.order = order;
  t.num_subcells = ns;
  for (int k = 0; k < n1; ++k) {
    t.nodes.push_back(static_cast<double>(rule.nodes[k]));
    t.weights.push_back(static_cast<double>(rule.weights[k]));
    t.left_values.push_back(static_cast<double>(lagrange_real(rule.nodes, k, 0.0L)));
    t.right_values.push_back(static_cast<double>(lagrange_real(rule.nodes, k, 1.0L)));
  }
  for (int k = 0; k < n1; ++k) {
    t.right_values[n1 - 1 - k] = t.left_values[k];
  }

  t.derivative = to_matrix(d);
  symmetrize(t.derivative, -1.0);
  t.subcell_projection = to_matrix(sub.projection);
  symmetrize(t.subcell_projection, 1.0);
  t.subcell_recovery = to_matrix(sub.recovery);
  symmetrize(t.subcell_recovery, 1.0);

  RealMatrix stiff = zeros(n1, n1);
  for (int k = 0; k < n1; ++k)
    for (int j = 0; j < n1; ++j) stiff[k][j] = rule.weights[j] * d[j][k] / rule.weights[k];
  t.volume_stiffness = to_matrix(stiff);
  symmetrize(t.volume_stiffness, -1.0);

  // Time direction: K1(k,l) = phi_k(1) phi_l(1) - w_l phi_k'(tau_l).
  RealMatrix k1 = zeros(n1, n1);
  RealMatrix ident = zeros(n1, n1);
  for (int k = 0; k < n1; ++k) {
    ident[k][k] = 1.0L;
    Real rk = lagrange_real(rule.nodes, k, 1.0L);
    for (int l = 0; l < n1; ++l) k1[k][l] = rk * lagrange_real(rule.nodes, l, 1.0L) - rule.weights[l] * d[l][k];
  }
  RealMatrix k1inv = solve(k1, ident);
  for (int k = 0; k < n1; ++k)
    for (int l = 0; l < n1; ++l) k1inv[k][l] *= rule.weights[l];
  t.picard_operator = to_matrix(k1inv);

  t.left_lift = Matrix(n1, 1);
  t.right_lift = Matrix(n1, 1);
  t.left_trace = Matrix(1, n1);
  t.right_trace = Matrix(1, n1);
  t.weight_row = Matrix(1, n1);
  for (int k = 0; k < n1; ++k) {
    t.left_lift(k, 0) = static_cast<double>(lagrange_real(rule.nodes, k, 0.0L) / rule.weights[k]);
    t.left_trace(0, k) = t.left_values[k];
    t.right_trace(0, k) = t.right_values[k];
    t.weight_row(0, k) = t.weights[k];
  }
  for (int k = 0; k < n1; ++k) t.right_lift(n1 - 1 - k, 0) = t.left_lift(k, 0);

  RealMatrix fsw = zeros(n1, ns);
  for (int k = 0; k < n1; ++k)
    for (int s = 0; s < ns; ++s) fsw[k][s] = sub.projection[s][k] / (ns * rule.weights[k]);
  t.face_subcell_weights = to_matrix(fsw);
  symmetrize(t.face_subcell_weights, 1.0);
  return t;
}

const BasisTables& basis_tables(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("basis order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  static std::array<std::unique_ptr<const BasisTables>, kMaxOrder + 1> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const BasisTables>(build_basis_tables(order));
  return *slot;
}

}  // namespace aderdg
