// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ucalc/calculus.hpp"
#include "ucalc/padic.hpp"

namespace ucalc {

// Square matrices as rows.
using PadicMatrix = std::vector<PadicVector>;

PadicMatrix mat_identity(const PadicContext& ctx, std::size_t n);
PadicMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b);
PadicVector mat_apply(const PadicMatrix& a, std::span<const Padic> x);
bool mat_equal(const PadicMatrix& a, const PadicMatrix& b);

struct MatrixInverse {
  PadicMatrix inverse;
  // Sum of the pivot valuations, i.e. v(det M).
  Valuation pivot_valuation = 0;
};

// Gauss-Jordan elimination choosing the entry of minimal valuation in the
// active column. Singular for a vanishing column, or for inexact input whose
// determinant valuation reaches the context precision.
MatrixInverse mat_inverse_tracked(const PadicMatrix& m);
PadicMatrix mat_inverse(const PadicMatrix& m);

// Finite-dimensional associative unital algebra: e_i e_j = sum_k t(i,j,k) e_k.
class StructAlgebra {
 public:
  StructAlgebra() = default;
  // Checks associativity on all basis triples and both unit laws.
  StructAlgebra(const PadicContext& ctx, int n, std::vector<Padic> t, PadicVector one);

  const PadicContext& context() const noexcept { return ctx_; }
  int dim() const noexcept { return n_; }
  const Padic& t(int i, int j, int k) const { return t_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }
  const std::vector<Padic>& constants() const noexcept { return t_; }
  const PadicVector& one() const noexcept { return one_; }

  PadicVector mul(std::span<const Padic> x, std::span<const Padic> y) const;
  // Matrix of y -> a y.
  PadicMatrix left_regular(std::span<const Padic> a) const;

 private:
  struct Term {
    int k;
    Padic c;
  };

  PadicContext ctx_;
  int n_ = 0;
  std::vector<Padic> t_;
  PadicVector one_;
  std::vector<std::vector<Term>> sparse_;  // indexed by i * n + j
};

StructAlgebra scalar_algebra(const PadicContext& ctx);
// M_m(Q_p) with basis E_ab at index a m + b.
StructAlgebra matrix_algebra(const PadicContext& ctx, int m);
// Q_p[x]/(x^n + c_{n-1} x^{n-1} + ... + c_0) with basis 1, x, ..., x^(n-1).
StructAlgebra quotient_algebra(const PadicContext& ctx, const PadicVector& c);
// F (x) A with basis f_i (x) a_r at index i dim(A) + r.
StructAlgebra tensor(const StructAlgebra& F, const StructAlgebra& A);

// Coordinates of an m x m matrix in matrix_algebra(m), and back.
PadicVector matrix_coords(const PadicMatrix& m);
PadicMatrix coords_matrix(std::span<const Padic> x, int m);

PadicVector alg_mul(const StructAlgebra& A, std::span<const Padic> x, std::span<const Padic> y);
// NotAUnit when the left regular representation is singular.
PadicVector alg_inverse(const StructAlgebra& A, std::span<const Padic> a);

// The A-valued matrix S(z) with entries delta_kj + sum_i z_i t(i,j,k),
// flattened to its regular representation over Q_p.
PadicMatrix s_matrix(const StructAlgebra& F, const StructAlgebra& A, const std::vector<PadicVector>& z);
// v = -S(z)^-1 z, so that (1 + phi(z))(1 + phi(v)) = 1 in F (x) A.
// SMatrixSingular outside the neighbourhood where S(z) is invertible.
std::vector<PadicVector> tensor_right_inverse(const StructAlgebra& F, const StructAlgebra& A,
                                              const std::vector<PadicVector>& z);
// Coordinates of 1 + phi(z) in tensor(F, A).
PadicVector one_plus_phi(const StructAlgebra& F, const StructAlgebra& A, const std::vector<PadicVector>& z);

// For t != 0: (inv(x + t v) - inv(x)) / t against -inv(x + t v) v inv(x).
// For t = 0: -inv(x) v inv(x) against the s-coefficient of inv(x + s v)
// computed in A[s]/(s^2).
Comparison check_inversion_derivative(const StructAlgebra& A, std::span<const Padic> x, std::span<const Padic> v,
                                      const Padic& t);

}  // namespace ucalc
