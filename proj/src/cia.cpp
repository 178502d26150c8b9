// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/cia.hpp"

#include <algorithm>

namespace ucalc {

PadicMatrix mat_identity(const PadicContext& ctx, std::size_t n) {
  PadicMatrix out(n, zero_vector(ctx, n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = Padic::from_integer(ctx, 1);
  return out;
}

PadicMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.empty()) return {};
  const std::size_t n = a.size(), m = b.size(), q = b.empty() ? 0 : b[0].size();
  if (a[0].size() != m) fail(ErrorKind::InvalidArgument, "matrix shapes do not match");
  PadicContext ctx;
  for (const auto& row : a)
    for (const auto& e : row)
      if (!ctx.is_set() && e.context().is_set()) ctx = e.context();
  PadicMatrix out(n, zero_vector(ctx, q));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < q; ++j)
        if (!b[k][j].is_zero()) out[i][j] = out[i][j] + a[i][k] * b[k][j];
    }
  return out;
}

PadicVector mat_apply(const PadicMatrix& a, std::span<const Padic> x) {
  PadicVector out;
  for (const auto& row : a) {
    if (row.size() != x.size()) fail(ErrorKind::InvalidArgument, "matrix and vector sizes differ");
    Padic s = x.empty() ? Padic() : Padic(x[0].context());
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!row[j].is_zero() && !x[j].is_zero()) s = s + row[j] * x[j];
    out.push_back(std::move(s));
  }
  return out;
}

bool mat_equal(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal_at_precision(a[i], b[i])) return false;
  return true;
}

MatrixInverse mat_inverse_tracked(const PadicMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) fail(ErrorKind::InvalidArgument, "matrix is not square");
  if (n == 0) return {};
  PadicContext ctx;
  for (const auto& row : m)
    for (const auto& e : row)
      if (!ctx.is_set() && e.context().is_set()) ctx = e.context();
  bool exact = true;
  for (const auto& row : m)
    for (const auto& e : row) exact = exact && e.is_exact();
  PadicMatrix a = m;
  PadicMatrix b = mat_identity(ctx, n);
  MatrixInverse out;
  try {
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t best = n;
      for (std::size_t r = col; r < n; ++r) {
        if (a[r][col].is_zero()) continue;
        if (best == n || a[r][col].valuation() < a[best][col].valuation()) best = r;
      }
      if (best == n) fail(ErrorKind::Singular, "no pivot in column " + std::to_string(col));
      std::swap(a[col], a[best]);
      std::swap(b[col], b[best]);
      out.pivot_valuation += a[col][col].valuation();
      const Padic inv = a[col][col].inverse();
      for (auto& e : a[col]) e = inv * e;
      for (auto& e : b[col]) e = inv * e;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || a[r][col].is_zero()) continue;
        const Padic f = a[r][col];
        for (std::size_t j = 0; j < n; ++j) {
          if (!a[col][j].is_zero()) a[r][j] = a[r][j] - f * a[col][j];
          if (!b[col][j].is_zero()) b[r][j] = b[r][j] - f * b[col][j];
        }
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PrecisionLoss) fail(ErrorKind::Singular, std::string("pivot lost: ") + e.what());
    throw;
  }
  if (!exact && out.pivot_valuation >= ctx.precision())
    fail(ErrorKind::Singular, "determinant valuation " + std::to_string(out.pivot_valuation) +
                                  " reaches the working precision");
  out.inverse = std::move(b);
  return out;
}

PadicMatrix mat_inverse(const PadicMatrix& m) { return mat_inverse_tracked(m).inverse; }

StructAlgebra::StructAlgebra(const PadicContext& ctx, int n, std::vector<Padic> constants, PadicVector one)
    : ctx_(ctx), n_(n), t_(std::move(constants)), one_(std::move(one)) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "algebra dimension must be positive");
  if (t_.size() != static_cast<std::size_t>(n) * n * n)
    fail(ErrorKind::InvalidArgument, "expected n^3 structure constants");
  if (one_.size() != static_cast<std::size_t>(n)) fail(ErrorKind::InvalidArgument, "unit has the wrong length");
  sparse_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!t(i, j, k).is_zero()) sparse_[static_cast<std::size_t>(i * n + j)].push_back({k, t(i, j, k)});

  auto basis = [&](int i) {
    PadicVector e = zero_vector(ctx_, static_cast<std::size_t>(n_));
    e[static_cast<std::size_t>(i)] = Padic::from_integer(ctx_, 1);
    return e;
  };
  for (int i = 0; i < n; ++i) {
    const PadicVector ei = basis(i);
    if (!equal_at_precision(mul(one_, ei), ei) || !equal_at_precision(mul(ei, one_), ei))
      fail(ErrorKind::InvalidArgument, "unit law fails on basis element " + std::to_string(i));
    for (int j = 0; j < n; ++j) {
      const PadicVector eij = mul(ei, basis(j));
      for (int k = 0; k < n; ++k) {
        const PadicVector ek = basis(k);
        if (!equal_at_precision(mul(eij, ek), mul(ei, mul(basis(j), ek))))
          fail(ErrorKind::InvalidArgument, "associativity fails on basis triple (" + std::to_string(i) + "," +
                                               std::to_string(j) + "," + std::to_string(k) + ")");
      }
    }
  }
}

PadicVector StructAlgebra::mul(std::span<const Padic> x, std::span<const Padic> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
    fail(ErrorKind::InvalidArgument, "algebra element has the wrong length");
  PadicVector out = zero_vector(ctx_, static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < n_; ++j) {
      if (y[j].is_zero()) continue;
      const Padic xy = x[i] * y[j];
      for (const auto& term : sparse_[static_cast<std::size_t>(i * n_ + j)]) out[term.k] = out[term.k] + term.c * xy;
    }
  }
  return out;
}

PadicMatrix StructAlgebra::left_regular(std::span<const Padic> a) const {
  PadicMatrix out(static_cast<std::size_t>(n_), zero_vector(ctx_, static_cast<std::size_t>(n_)));
  for (int i = 0; i < n_; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < n_; ++j)
      for (const auto& term : sparse_[static_cast<std::size_t>(i * n_ + j)])
        out[term.k][j] = out[term.k][j] + term.c * a[i];
  }
  return out;
}

StructAlgebra scalar_algebra(const PadicContext& ctx) {
  return StructAlgebra(ctx, 1, {Padic::from_integer(ctx, 1)}, {Padic::from_integer(ctx, 1)});
}

StructAlgebra matrix_algebra(const PadicContext& ctx, int m) {
  const int n = m * m;
  std::vector<Padic> t(static_cast<std::size_t>(n) * n * n, Padic(ctx));
  PadicVector one = zero_vector(ctx, static_cast<std::size_t>(n));
  for (int a = 0; a < m; ++a) {
    one[static_cast<std::size_t>(a * m + a)] = Padic::from_integer(ctx, 1);
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d)
        t[static_cast<std::size_t>(((a * m + b) * n + (b * m + d)) * n + (a * m + d))] = Padic::from_integer(ctx, 1);
  }
  return StructAlgebra(ctx, n, std::move(t), std::move(one));
}

StructAlgebra quotient_algebra(const PadicContext& ctx, const PadicVector& c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) fail(ErrorKind::InvalidArgument, "modulus must have positive degree");
  // pw[m] = x^m reduced, for m <= 2n - 2.
  std::vector<PadicVector> pw;
  for (int m = 0; m <= 2 * n - 2; ++m) {
    PadicVector v = zero_vector(ctx, static_cast<std::size_t>(n));
    if (m < n) {
      v[static_cast<std::size_t>(m)] = Padic::from_integer(ctx, 1);
    } else {
      const PadicVector& prev = pw.back();
      // x * prev: shift up, fold the x^n term back with -c.
      const Padic top = prev[static_cast<std::size_t>(n - 1)];
      for (int i = n - 1; i >= 1; --i) v[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i - 1)];
      for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] - top * c[i];
    }
    pw.push_back(std::move(v));
  }
  std::vector<Padic> t(static_cast<std::size_t>(n) * n * n, Padic(ctx));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t[static_cast<std::size_t>((i * n + j) * n + k)] = pw[i + j][k];
  return StructAlgebra(ctx, n, std::move(t), pw[0]);
}

StructAlgebra tensor(const StructAlgebra& F, const StructAlgebra& A) {
  const PadicContext& ctx = F.context();
  if (!(ctx == A.context())) fail(ErrorKind::ContextMismatch, "tensor factors over different contexts");
  const int nf = F.dim(), na = A.dim(), n = nf * na;
  std::vector<Padic> t(static_cast<std::size_t>(n) * n * n, Padic(ctx));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j)
      for (int k = 0; k < nf; ++k) {
        const Padic& f = F.t(i, j, k);
        if (f.is_zero()) continue;
        for (int r = 0; r < na; ++r)
          for (int s = 0; s < na; ++s)
            for (int q = 0; q < na; ++q) {
              const Padic& a = A.t(r, s, q);
              if (a.is_zero()) continue;
              t[static_cast<std::size_t>(((i * na + r) * n + (j * na + s)) * n + (k * na + q))] = f * a;
            }
      }
  PadicVector one;
  for (int i = 0; i < nf; ++i)
    for (int r = 0; r < na; ++r) one.push_back(F.one()[i] * A.one()[r]);
  return StructAlgebra(ctx, n, std::move(t), std::move(one));
}

PadicVector matrix_coords(const PadicMatrix& m) {
  PadicVector out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

PadicMatrix coords_matrix(std::span<const Padic> x, int m) {
  if (x.size() != static_cast<std::size_t>(m) * m) fail(ErrorKind::InvalidArgument, "expected m^2 coordinates");
  PadicMatrix out;
  for (int a = 0; a < m; ++a) out.emplace_back(x.begin() + a * m, x.begin() + (a + 1) * m);
  return out;
}

PadicVector alg_mul(const StructAlgebra& A, std::span<const Padic> x, std::span<const Padic> y) { return A.mul(x, y); }

PadicVector alg_inverse(const StructAlgebra& A, std::span<const Padic> a) {
  PadicMatrix inv;
  try {
    inv = mat_inverse(A.left_regular(a));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Singular) fail(ErrorKind::NotAUnit, std::string("element is not a unit: ") + e.what());
    throw;
  }
  PadicVector x = mat_apply(inv, A.one());
  if (!equal_at_precision(A.mul(a, x), A.one())) fail(ErrorKind::NotAUnit, "computed inverse fails the product check");
  return x;
}

PadicMatrix s_matrix(const StructAlgebra& F, const StructAlgebra& A, const std::vector<PadicVector>& z) {
  const int n = F.dim(), na = A.dim();
  if (static_cast<int>(z.size()) != n) fail(ErrorKind::InvalidArgument, "need one A-element per basis vector of F");
  const PadicContext& ctx = A.context();
  const std::size_t N = static_cast<std::size_t>(n) * na;
  PadicMatrix out(N, zero_vector(ctx, N));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      PadicVector akj = k == j ? A.one() : zero_vector(ctx, static_cast<std::size_t>(na));
      for (int i = 0; i < n; ++i) {
        if (F.t(i, j, k).is_zero()) continue;
        for (int r = 0; r < na; ++r) akj[r] = akj[r] + F.t(i, j, k) * z[i][r];
      }
      const PadicMatrix block = A.left_regular(akj);
      for (int r = 0; r < na; ++r)
        for (int s = 0; s < na; ++s)
          out[static_cast<std::size_t>(k * na + r)][static_cast<std::size_t>(j * na + s)] = block[r][s];
    }
  return out;
}

std::vector<PadicVector> tensor_right_inverse(const StructAlgebra& F, const StructAlgebra& A,
                                              const std::vector<PadicVector>& z) {
  const int n = F.dim(), na = A.dim();
  PadicMatrix sinv;
  try {
    sinv = mat_inverse(s_matrix(F, A, z));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Singular) fail(ErrorKind::SMatrixSingular, e.what());
    throw;
  }
  PadicVector flat;
  for (const auto& zi : z) {
    if (static_cast<int>(zi.size()) != na) fail(ErrorKind::InvalidArgument, "A-element has the wrong length");
    for (const auto& c : zi) flat.push_back(-c);
  }
  const PadicVector v = mat_apply(sinv, flat);
  std::vector<PadicVector> out;
  for (int k = 0; k < n; ++k) out.emplace_back(v.begin() + k * na, v.begin() + (k + 1) * na);
  return out;
}

PadicVector one_plus_phi(const StructAlgebra& F, const StructAlgebra& A, const std::vector<PadicVector>& z) {
  PadicVector out;
  for (int i = 0; i < F.dim(); ++i)
    for (int r = 0; r < A.dim(); ++r) out.push_back(F.one()[i] * A.one()[r] + z[i][r]);
  return out;
}

Comparison check_inversion_derivative(const StructAlgebra& A, std::span<const Padic> x, std::span<const Padic> v,
                                      const Padic& t) {
  const PadicVector ix = alg_inverse(A, x);
  if (!t.is_zero()) {
    const PadicVector moved = std::span<const Padic>(x) + t * v;
    const PadicVector im = alg_inverse(A, moved);
    PadicVector lhs = t.inverse() * (im - ix);
    PadicVector rhs = -Padic::from_integer(A.context(), 1) * A.mul(im, A.mul(v, ix));
    return compare(std::move(lhs), std::move(rhs));
  }
  const PadicContext& ctx = A.context();
  const StructAlgebra dual = tensor(quotient_algebra(ctx, {Padic(ctx), Padic(ctx)}), A);
  PadicVector xs(x.begin(), x.end());
  xs.insert(xs.end(), v.begin(), v.end());
  const PadicVector inv = alg_inverse(dual, xs);
  PadicVector rhs(inv.begin() + A.dim(), inv.end());
  PadicVector lhs = -Padic::from_integer(ctx, 1) * A.mul(ix, A.mul(v, ix));
  return compare(std::move(lhs), std::move(rhs));
}

}  // namespace ucalc
