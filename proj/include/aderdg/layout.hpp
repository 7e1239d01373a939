#pragma once

#include "aderdg/kernels.hpp"

namespace aderdg {

/// Sizes of the per-element arrays for polynomial degree N in d dimensions
/// with m quantities. All arrays are AoS with the quantity index fastest.
struct ElementLayout {
  ElementLayout() = default;
  ElementLayout(int order, int dims, int num_vars);

  int order = 0;
  int n1 = 1;        // N+1
  int dims = 1;
  int m = 1;
  int nsp = 1;       // (N+1)^d spatial nodes
  int nst = 1;       // (N+1)^(d+1) space-time nodes
  int nface_sp = 1;  // (N+1)^(d-1)
  int nface_st = 1;  // (N+1)^d
  int ns = 1;        // 2N+1 subcells per dimension
  int nsub = 1;      // (2N+1)^d
  int nsubface = 1;  // (2N+1)^(d-1)

  TensorShape spatial;     // d dims of N+1
  TensorShape space_time;  // d dims of N+1, then time
  TensorShape subcells;    // d dims of 2N+1
};

inline ElementLayout::ElementLayout(int order_, int dims_, int num_vars)
    : order(order_), n1(order_ + 1), dims(dims_), m(num_vars), ns(2 * order_ + 1) {
  nsp = 1;
  nsub = 1;
  for (int d = 0; d < dims; ++d) {
    nsp *= n1;
    nsub *= ns;
  }
  nst = nsp * n1;
  nface_sp = nsp / n1;
  nface_st = nsp;
  nsubface = nsub / ns;
  spatial.m = m;
  spatial.ndims = dims;
  subcells.m = m;
  subcells.ndims = dims;
  space_time.m = m;
  space_time.ndims = dims + 1;
  for (int d = 0; d < dims; ++d) {
    spatial.extent[d] = n1;
    space_time.extent[d] = n1;
    subcells.extent[d] = ns;
  }
  space_time.extent[dims] = n1;
}

}  // namespace aderdg
