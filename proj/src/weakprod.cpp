// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/weakprod.hpp"

#include <algorithm>

namespace ucalc {

bool is_zero_vector(std::span<const Padic> x) {
  return std::all_of(x.begin(), x.end(), [](const Padic& a) { return a.is_zero(); });
}

bool vanishes_at_zero(const FunctionModel& f, int d) {
  const PadicContext& ctx = f.context();
  const int n = f.dim();
  std::vector<Poly> slice;
  for (int i = 0; i < n; ++i) slice.push_back(i < d ? Poly(ctx, n) : Poly::variable(ctx, n, i));
  bool met = false;
  for (const auto& pc : f.pieces()) {
    const auto& c = pc.ball.center();
    if (!std::all_of(c.begin(), c.begin() + d, [](std::int64_t ci) { return ci == 0; })) continue;
    met = true;
    for (const auto& q : pc.components)
      if (!substitute(q, slice).is_zero()) return false;
  }
  return met;
}

GlobalDiffeo GlobalDiffeo::make(const PadicContext& ctx, std::vector<GlobalPiece> pieces) {
  if (pieces.empty()) fail(ErrorKind::InvalidArgument, "global map without pieces");
  std::vector<Ball> src, dst;
  for (const auto& pc : pieces) {
    pc.map.validate();
    if (!(pc.inner.ball() == pc.map.source)) fail(ErrorKind::InvalidArgument, "inner diffeo on the wrong ball");
    src.push_back(pc.map.source);
    dst.push_back(pc.map.target);
  }
  auto disjoint = [](const std::vector<Ball>& bs) {
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j)
        if (ball_relation(bs[i], bs[j]) != BallRelation::Disjoint) return false;
    return true;
  };
  if (!disjoint(src) || !disjoint(dst)) fail(ErrorKind::NotBijective, "pieces overlap");
  const Ball& first = src.front();
  Region from(first.prime(), first.dim(), src), to(first.prime(), first.dim(), dst);
  if (!(from == to)) fail(ErrorKind::NotBijective, "sources and targets cover different regions");
  GlobalDiffeo out;
  out.ctx_ = ctx;
  out.pieces_ = std::move(pieces);
  out.region_ = std::move(from);
  return out;
}

std::vector<Ball> GlobalDiffeo::sources() const {
  std::vector<Ball> out;
  for (const auto& pc : pieces_) out.push_back(pc.map.source);
  return out;
}

namespace {

PadicVector reduce_mod(const PadicContext& ctx, std::span<const Padic> x, Valuation T) {
  PadicVector out;
  for (const auto& xi : x) out.push_back(Padic::from_integer(ctx, xi.residue(T)));
  return out;
}

}  // namespace

PadicVector GlobalDiffeo::eval(std::span<const Padic> x, Valuation precision) const {
  for (const auto& pc : pieces_) {
    if (!pc.map.source.contains(x)) continue;
    PadicVector y = pc.inner.eval(ctx_, x, precision);
    return reduce_mod(ctx_, pc.map.apply(y), precision);
  }
  fail(ErrorKind::OutOfDomain, to_string(x) + " is outside the global map's region");
}

PadicVector GlobalDiffeo::eval_inverse(std::span<const Padic> y, Valuation precision) const {
  for (const auto& pc : pieces_) {
    if (!pc.map.target.contains(y)) continue;
    PadicVector z = reduce_mod(ctx_, pc.map.apply_inverse(y), precision);
    return pc.inner.inverse().eval(ctx_, z, precision);
  }
  fail(ErrorKind::OutOfDomain, to_string(y) + " is outside the global map's region");
}

BallProduct conjugate_global(const GlobalDiffeo& gamma, const BallProduct& eta, int level) {
  const auto src = gamma.sources();
  if (std::set<Ball>(src.begin(), src.end()) != eta.index())
    fail(ErrorKind::RefinementMismatch, "index balls differ from the source balls of the global map");
  std::set<Ball> targets;
  for (const auto& pc : gamma.pieces()) targets.insert(pc.map.target);
  BallProduct out(targets);
  for (const auto& pc : gamma.pieces()) {
    const DiffeoWord* e = eta.find(pc.map.source);
    if (!e) continue;
    DiffeoWord inside = pc.inner * *e * pc.inner.inverse();
    out.set(pc.map.target, conjugate_affine(inside, pc.map, level));
  }
  return out;
}

PadicVector apply(const BallProduct& x, const PadicContext& ctx, std::span<const Padic> point, Valuation precision) {
  for (const auto& [ball, w] : x.entries())
    if (ball.contains(point)) return w.eval(ctx, point, precision);
  return reduce_mod(ctx, point, precision);
}

Permutation region_permutation(const Region& U, int L,
                               const std::function<PadicVector(std::span<const Padic>)>& map,
                               const PadicContext& ctx) {
  const auto pts = region_points(U, L);
  std::map<std::vector<std::int64_t>, std::int64_t> where;
  for (std::size_t i = 0; i < pts.size(); ++i) where.emplace(pts[i], static_cast<std::int64_t>(i));
  Permutation out;
  for (const auto& z : pts) {
    auto it = where.find(residues(map(integer_vector(ctx, z)), U.prime(), L));
    if (it == where.end()) fail(ErrorKind::NotBijective, "map leaves the region");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace ucalc
