// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/rng.hpp"

#include <functional>

namespace ucalc {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(ErrorKind::InvalidArgument, "empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

Padic random_padic(const PadicContext& ctx, Rng& rng, int min_v, int max_v, int digits, bool allow_zero) {
  if (allow_zero && rng.uniform(0, 9) == 0) return Padic(ctx);
  const std::int64_t bound = ipow(ctx.prime(), digits);
  std::int64_t u;
  do {
    u = rng.uniform(1, bound - 1);
  } while (u % ctx.prime() == 0);
  if (rng.coin()) u = -u;
  return Padic::exact(ctx, rng.uniform(min_v, max_v), u);
}

PadicVector random_point(const PadicContext& ctx, const Ball& ball, Rng& rng, int extra_digits) {
  const std::int64_t step = ipow(ball.prime(), ball.level());
  const std::int64_t spread = ipow(ball.prime(), extra_digits);
  PadicVector x;
  for (auto c : ball.center()) x.push_back(Padic::from_integer(ctx, c + step * rng.uniform(0, spread - 1)));
  return x;
}

Poly random_poly(const PadicContext& ctx, int nvars, int deg, Rng& rng, int min_v, int digits) {
  Poly q(ctx, nvars);
  // Enumerate exponent vectors of total degree <= deg.
  std::vector<Exponents> all;
  Exponents e(nvars, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == nvars) {
      all.push_back(e);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, deg);
  for (const auto& ex : all)
    if (rng.uniform(0, 2) != 0) q.add_term(ex, random_padic(ctx, rng, min_v, min_v + 1, digits));
  return q;
}

std::vector<Ball> random_partition(int p, int d, Rng& rng, int splits, int max_level) {
  return random_partition(Ball::unit(p, d), rng, splits, max_level);
}

std::vector<Ball> random_partition(const Ball& root, Rng& rng, int splits, int max_level) {
  std::vector<Ball> balls{root};
  for (int s = 0; s < splits; ++s) {
    std::size_t i = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(balls.size()) - 1));
    if (balls[i].level() >= max_level) continue;
    auto kids = balls[i].children();
    balls.erase(balls.begin() + static_cast<std::ptrdiff_t>(i));
    balls.insert(balls.end(), kids.begin(), kids.end());
  }
  return balls;
}

FunctionModel random_model(const PadicContext& ctx, std::span<const Ball> pieces, int e, int deg, Rng& rng,
                           int min_v) {
  std::vector<Piece> out;
  for (const auto& b : pieces) {
    Piece pc{b, {}};
    for (int i = 0; i < e; ++i) pc.components.push_back(random_poly(ctx, b.dim(), deg, rng, min_v));
    out.push_back(std::move(pc));
  }
  return FunctionModel(ctx, pieces.empty() ? 0 : pieces.front().dim(), e, std::move(out));
}

CertifiedDiffeo random_diffeo(const PadicContext& ctx, const Ball& ball, Rng& rng, int deg, int splits,
                              int extra_levels) {
  const int min_v = omega_threshold(ball.prime()) + ball.level();
  auto parts = random_partition(ball, rng, splits, ball.level() + extra_levels);
  FunctionModel sigma = random_model(ctx, parts, ball.dim(), deg, rng, min_v);
  return CertifiedDiffeo::certify(BallEndo::make(ball, std::move(sigma)));
}

}  // namespace ucalc
