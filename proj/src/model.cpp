// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/model.hpp"

#include <algorithm>

namespace ucalc {

namespace {

void check_disjoint(const std::vector<Ball>& balls) {
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (ball_relation(balls[i], balls[j]) != BallRelation::Disjoint)
        fail(ErrorKind::InvalidArgument, "pieces overlap: " + balls[i].to_string() + " and " + balls[j].to_string());
}

std::vector<Ball> piece_balls(const std::vector<Piece>& pieces) {
  std::vector<Ball> out;
  out.reserve(pieces.size());
  for (const auto& pc : pieces) out.push_back(pc.ball);
  return out;
}

}  // namespace

FunctionModel::FunctionModel(const PadicContext& ctx, int d, int e, std::vector<Piece> pieces)
    : ctx_(ctx), d_(d), e_(e), pieces_(std::move(pieces)) {
  if (!ctx.is_set()) fail(ErrorKind::InvalidArgument, "function model needs a context");
  for (const auto& pc : pieces_) {
    if (pc.ball.prime() != ctx.prime() || pc.ball.dim() != d)
      fail(ErrorKind::InvalidArgument, "piece ball does not match the model shape");
    if (static_cast<int>(pc.components.size()) != e) fail(ErrorKind::InvalidArgument, "piece has wrong codimension");
    for (const auto& q : pc.components)
      if (q.nvars() != d) fail(ErrorKind::InvalidArgument, "piece polynomial has wrong arity");
  }
  auto balls = piece_balls(pieces_);
  check_disjoint(balls);
  domain_ = Region(ctx.prime(), d, std::move(balls));
}

FunctionModel FunctionModel::uniform(const PadicContext& ctx, const Region& domain, std::vector<Poly> components) {
  std::vector<Piece> pieces;
  for (const auto& b : domain.balls()) pieces.push_back({b, components});
  return FunctionModel(ctx, domain.dim(), static_cast<int>(components.size()), std::move(pieces));
}

FunctionModel FunctionModel::identity(const PadicContext& ctx, const Region& domain) {
  std::vector<Poly> comps;
  for (int i = 0; i < domain.dim(); ++i) comps.push_back(Poly::variable(ctx, domain.dim(), i));
  return uniform(ctx, domain, std::move(comps));
}

FunctionModel FunctionModel::zero(const PadicContext& ctx, const Region& domain, int e) {
  return uniform(ctx, domain, std::vector<Poly>(e, Poly(ctx, domain.dim())));
}

FunctionModel FunctionModel::constant(const PadicContext& ctx, const Region& domain, const PadicVector& c) {
  std::vector<Poly> comps;
  for (const auto& ci : c) comps.push_back(Poly::constant(ctx, domain.dim(), ci));
  return uniform(ctx, domain, std::move(comps));
}

FunctionModel FunctionModel::linear(const PadicContext& ctx, const Region& domain,
                                    const std::vector<PadicVector>& rows) {
  const int d = domain.dim();
  std::vector<Poly> comps;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) fail(ErrorKind::InvalidArgument, "matrix row has wrong length");
    Poly q(ctx, d);
    for (int j = 0; j < d; ++j) q += row[j] * Poly::variable(ctx, d, j);
    comps.push_back(std::move(q));
  }
  return uniform(ctx, domain, std::move(comps));
}

std::size_t FunctionModel::piece_index(std::span<const Padic> x) const {
  if (static_cast<int>(x.size()) != d_) fail(ErrorKind::InvalidArgument, "point dimension mismatch");
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].ball.contains(x)) return i;
  fail(ErrorKind::OutOfDomain, "point " + to_string(x) + " lies outside the domain");
}

PadicVector FunctionModel::eval(std::span<const Padic> x) const {
  const auto& pc = pieces_[piece_index(x)];
  PadicVector out;
  out.reserve(e_);
  for (const auto& q : pc.components) out.push_back(evaluate(q, x));
  return out;
}

std::vector<Jet> FunctionModel::eval(std::span<const Jet> x) const {
  if (x.empty()) fail(ErrorKind::InvalidArgument, "empty jet point");
  PadicVector base;
  for (const auto& xi : x) base.push_back(xi.constant_term());
  const auto& pc = pieces_[piece_index(base)];
  std::vector<Jet> out;
  out.reserve(e_);
  for (const auto& q : pc.components) out.push_back(evaluate<Jet>(q, x, x.front()));
  return out;
}

FunctionModel FunctionModel::refine(std::span<const Ball> balls) const {
  std::vector<Piece> out;
  for (const auto& b : balls) {
    auto it = std::find_if(pieces_.begin(), pieces_.end(), [&](const Piece& pc) { return pc.ball.contains(b); });
    if (it == pieces_.end()) fail(ErrorKind::NotContained, b.to_string() + " is not inside a single piece");
    out.push_back({b, it->components});
  }
  FunctionModel refined(ctx_, d_, e_, std::move(out));
  if (!(refined.domain_ == domain_)) fail(ErrorKind::InvalidArgument, "refinement does not tile the domain");
  return refined;
}

FunctionModel FunctionModel::restrict_to(const Region& sub) const {
  if (!is_subset(sub, domain_)) fail(ErrorKind::NotContained, "restriction leaves the domain");
  std::vector<Piece> out;
  for (const auto& pc : pieces_) {
    for (const auto& b : sub.balls()) {
      switch (ball_relation(pc.ball, b)) {
        case BallRelation::Equal:
        case BallRelation::SecondContainsFirst: out.push_back(pc); break;
        case BallRelation::FirstContainsSecond: out.push_back({b, pc.components}); break;
        case BallRelation::Disjoint: break;
      }
    }
  }
  return FunctionModel(ctx_, d_, e_, std::move(out));
}

bool FunctionModel::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& pc) {
    return std::all_of(pc.components.begin(), pc.components.end(), [](const Poly& q) { return q.is_zero(); });
  });
}

std::vector<Ball> common_refinement(const FunctionModel& a, const FunctionModel& b) {
  if (!(a.domain() == b.domain())) fail(ErrorKind::InvalidArgument, "models live on different domains");
  std::vector<Ball> out;
  for (const auto& pa : a.pieces()) {
    for (const auto& pb : b.pieces()) {
      switch (ball_relation(pa.ball, pb.ball)) {
        case BallRelation::Equal:
        case BallRelation::SecondContainsFirst: out.push_back(pa.ball); break;
        case BallRelation::FirstContainsSecond: out.push_back(pb.ball); break;
        case BallRelation::Disjoint: break;
      }
    }
  }
  return out;
}

namespace {

FunctionModel combine(const FunctionModel& a, const FunctionModel& b, const Padic& sign) {
  if (a.codim() != b.codim()) fail(ErrorKind::InvalidArgument, "codimension mismatch");
  auto balls = common_refinement(a, b);
  FunctionModel ra = a.refine(balls);
  FunctionModel rb = b.refine(balls);
  std::vector<Piece> out;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    Piece pc{balls[i], ra.pieces()[i].components};
    for (int k = 0; k < a.codim(); ++k) pc.components[k] += sign * rb.pieces()[i].components[k];
    out.push_back(std::move(pc));
  }
  return FunctionModel(a.context(), a.dim(), a.codim(), std::move(out));
}

}  // namespace

FunctionModel operator+(const FunctionModel& a, const FunctionModel& b) {
  return combine(a, b, Padic::from_integer(a.context(), 1));
}

FunctionModel operator-(const FunctionModel& a, const FunctionModel& b) {
  return combine(a, b, Padic::from_integer(a.context(), -1));
}

FunctionModel operator*(const Padic& c, const FunctionModel& a) {
  std::vector<Piece> out = a.pieces_;
  for (auto& pc : out)
    for (auto& q : pc.components) q = c * q;
  return FunctionModel(a.ctx_, a.d_, a.e_, std::move(out));
}

}  // namespace ucalc
