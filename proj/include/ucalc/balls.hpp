// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ucalc/padic.hpp"

namespace ucalc {

// p^e as a machine integer; throws InvalidArgument when it exceeds 2^62.
std::int64_t ipow(int p, int e);

// The coset center + p^k O^d inside O^d. The center is canonical: every
// coordinate lies in [0, p^k).
class Ball {
 public:
  Ball() = default;
  Ball(int p, std::vector<std::int64_t> center, int level);
  // O^d itself.
  static Ball unit(int p, int d) { return Ball(p, std::vector<std::int64_t>(d, 0), 0); }
  // The ball of the given level containing the integral point x.
  static Ball around(std::span<const Padic> x, int level);

  int prime() const noexcept { return p_; }
  int dim() const noexcept { return static_cast<int>(center_.size()); }
  int level() const noexcept { return k_; }
  const std::vector<std::int64_t>& center() const noexcept { return center_; }
  PadicVector center_vector(const PadicContext& ctx) const;

  bool contains(std::span<const Padic> x) const;
  bool contains(const Ball& other) const;
  Ball parent() const;
  std::vector<Ball> children() const;
  // Ancestor at the given coarser level.
  Ball ancestor(int level) const;

  friend bool operator==(const Ball&, const Ball&) = default;
  // Sorted by level, then by center.
  friend bool operator<(const Ball& a, const Ball& b);

  std::string to_string() const;

 private:
  int p_ = 0;
  std::vector<std::int64_t> center_;
  int k_ = 0;
};

enum class BallRelation { Equal, Disjoint, FirstContainsSecond, SecondContainsFirst };

BallRelation ball_relation(const Ball& a, const Ball& b);

// A finite union of balls in O^d, kept canonical: pairwise disjoint, no
// ball contained in another, complete sibling groups merged, sorted.
class Region {
 public:
  Region() = default;
  Region(int p, int d) : p_(p), d_(d) {}
  Region(int p, int d, std::vector<Ball> balls);
  explicit Region(const Ball& b) : Region(b.prime(), b.dim(), {b}) {}

  int prime() const noexcept { return p_; }
  int dim() const noexcept { return d_; }
  const std::vector<Ball>& balls() const noexcept { return balls_; }
  bool empty() const noexcept { return balls_.empty(); }
  // Finest level appearing (0 for the empty region).
  int finest_level() const;

  bool contains(std::span<const Padic> x) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  void canonicalize();

  int p_ = 0;
  int d_ = 0;
  std::vector<Ball> balls_;
};

Region region_union(const Region& a, const Region& b);
Region intersect(const Region& a, const Region& b);
Region subtract(const Region& a, const Region& b);
bool is_subset(const Region& a, const Region& b);

// Canonical disjoint ball decomposition; EmptyRegion for the empty region.
std::vector<Ball> decompose(const Region& region);

struct AssignedBall {
  Ball ball;
  std::size_t cover_index;
  friend bool operator==(const AssignedBall&, const AssignedBall&) = default;
};

// Cover members are processed in order; each takes whatever part of the
// region it covers that earlier members did not.
std::vector<AssignedBall> subordinate_partition(const Region& region, std::span<const Region> cover);

// Indicator of a clopen set; value 1 on the support.
struct Indicator {
  Region support;
  int operator()(std::span<const Padic> x) const { return support.contains(x) ? 1 : 0; }
};

std::vector<Indicator> partition_of_unity(const Region& region, std::span<const Region> cover);

// h = 1 on K, h = 0 off U. Each ball of K is widened to its coarsest
// ancestor that still lies in U.
Indicator cutoff(const Region& K, const Region& U);

// All p^(d*m) points of (Z/p^m)^d, as integer vectors with coordinates in [0, p^m).
std::vector<std::vector<std::int64_t>> level_points(int p, int d, int m);

}  // namespace ucalc
