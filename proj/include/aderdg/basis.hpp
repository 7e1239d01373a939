#pragma once

#include <span>
#include <vector>

namespace aderdg {

/// Small dense row-major matrix used for the one-dimensional operator tables.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<const double> row(int r) const { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  const double* data() const { return data_.data(); }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with N+1 points mapped to [0,1].
QuadratureRule gauss_legendre(int order);

/// D(k,l) = phi_l'(xi_k) / h for the Lagrange basis through `nodes`.
/// Under the Gauss-Legendre rule this equals (1/h) M^{-1} (phi_m, phi_l').
Matrix derivative_matrix(std::span<const double> nodes, std::span<const double> weights, double h = 1.0);

struct SubcellMatrices {
  Matrix projection;  ///< (2N+1) x (N+1): nodal values -> subcell averages
  Matrix recovery;    ///< (N+1) x (2N+1): subcell averages -> nodal values, mean preserving
};

SubcellMatrices subcell_matrices(int order);

/// phi_k(x) for the Lagrange basis through `nodes`.
double lagrange(std::span<const double> nodes, int k, double x);

/// All one-dimensional tables needed by the tensor-product kernels of one
/// polynomial degree. Instances are immutable and shared; obtain them via
/// basis_tables().
struct BasisTables {
  int order = 0;
  int num_subcells = 1;  // 2N+1

  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> left_values;   // phi_k(0)
  std::vector<double> right_values;  // phi_k(1)

  Matrix derivative;          // D(k,l) = phi_l'(xi_k), unit interval
  Matrix subcell_projection;  // P_sub
  Matrix subcell_recovery;    // R_sub

  // Derived operators used by the predictor/corrector kernels.
  Matrix volume_stiffness;     // K(k,j) = w_j D(j,k) / w_k
  Matrix picard_operator;      // K1^{-1} diag(w), time direction
  Matrix left_lift;            // (N+1) x 1: phi_k(0) / w_k
  Matrix right_lift;           // (N+1) x 1: phi_k(1) / w_k
  Matrix left_trace;           // 1 x (N+1): phi_k(0)
  Matrix right_trace;          // 1 x (N+1): phi_k(1)
  Matrix weight_row;           // 1 x (N+1): w_k
  Matrix face_subcell_weights; // (N+1) x (2N+1): h_s P_sub(s,k) / w_k
};

BasisTables build_basis_tables(int order);

/// Cached, thread-safe accessor. Valid for 0 <= order <= kMaxOrder.
const BasisTables& basis_tables(int order);

inline constexpr int kMaxOrder = 9;

}  // namespace aderdg
