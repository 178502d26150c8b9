// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ucalc/balls.hpp"
#include "ucalc/jet.hpp"
#include "ucalc/poly.hpp"

namespace ucalc {

// One polynomial per output coordinate, in the ambient (global) coordinates.
struct Piece {
  Ball ball;
  std::vector<Poly> components;
};

// Piecewise-polynomial map from a clopen region of O^d to Q_p^e.
class FunctionModel {
 public:
  FunctionModel() = default;
  FunctionModel(const PadicContext& ctx, int d, int e, std::vector<Piece> pieces);

  // The same polynomials on every ball of the region.
  static FunctionModel uniform(const PadicContext& ctx, const Region& domain, std::vector<Poly> components);
  static FunctionModel identity(const PadicContext& ctx, const Region& domain);
  static FunctionModel zero(const PadicContext& ctx, const Region& domain, int e);
  static FunctionModel constant(const PadicContext& ctx, const Region& domain, const PadicVector& c);
  // x -> M x for an e x d matrix given by rows.
  static FunctionModel linear(const PadicContext& ctx, const Region& domain, const std::vector<PadicVector>& rows);

  const PadicContext& context() const noexcept { return ctx_; }
  int dim() const noexcept { return d_; }
  int codim() const noexcept { return e_; }
  const Region& domain() const noexcept { return domain_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  // Index of the piece containing x; OutOfDomain otherwise.
  std::size_t piece_index(std::span<const Padic> x) const;
  PadicVector eval(std::span<const Padic> x) const;
  // Evaluation over jets; the piece is chosen by the constant terms.
  std::vector<Jet> eval(std::span<const Jet> x) const;

  // Same map on a finer partition; every ball must lie inside one piece and
  // the balls must tile the domain.
  FunctionModel refine(std::span<const Ball> balls) const;
  // Restriction to a sub-region made of whole balls of a refinement.
  FunctionModel restrict_to(const Region& sub) const;

  bool is_zero() const;

  friend FunctionModel operator+(const FunctionModel& a, const FunctionModel& b);
  friend FunctionModel operator-(const FunctionModel& a, const FunctionModel& b);
  friend FunctionModel operator*(const Padic& c, const FunctionModel& a);

 private:
  PadicContext ctx_;
  int d_ = 0;
  int e_ = 0;
  Region domain_;
  std::vector<Piece> pieces_;
};

// Pairwise intersections of the piece balls of two models on one domain.
std::vector<Ball> common_refinement(const FunctionModel& a, const FunctionModel& b);

}  // namespace ucalc
