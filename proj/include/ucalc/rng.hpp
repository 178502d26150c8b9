// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ucalc/balls.hpp"
#include "ucalc/diffeo.hpp"
#include "ucalc/model.hpp"

namespace ucalc {

// std::mt19937_64 with a portable integer mapping. split() seeds a fresh
// stream, so every sample of a suite can be replayed from (seed, sample index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  Rng split() { return Rng(next() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 engine_;
};

// Exact value p^v * u with |u| < p^digits, u prime to p (or zero when allowed).
Padic random_padic(const PadicContext& ctx, Rng& rng, int min_v, int max_v, int digits, bool allow_zero = true);
// Exact integer in [0, p^k) + p^k * (small offset): a point of the ball.
PadicVector random_point(const PadicContext& ctx, const Ball& ball, Rng& rng, int extra_digits = 3);
// Polynomial of total degree <= deg with small exact coefficients of valuation >= min_v.
Poly random_poly(const PadicContext& ctx, int nvars, int deg, Rng& rng, int min_v = 0, int digits = 2);
// A random ball partition of O^d, splitting up to `splits` times.
std::vector<Ball> random_partition(int p, int d, Rng& rng, int splits, int max_level);
std::vector<Ball> random_partition(const Ball& root, Rng& rng, int splits, int max_level);
FunctionModel random_model(const PadicContext& ctx, std::span<const Ball> pieces, int e, int deg, Rng& rng,
                           int min_v = 0);

// id + sigma on the ball with sigma piecewise polynomial of degree <= deg
// and coefficients of valuation >= v_min + level; always certifiable.
CertifiedDiffeo random_diffeo(const PadicContext& ctx, const Ball& ball, Rng& rng, int deg, int splits = 2,
                              int extra_levels = 1);

}  // namespace ucalc
