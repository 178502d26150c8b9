// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ucalc/balls.hpp"
#include "ucalc/rng.hpp"

using namespace ucalc;

namespace {

// Plain-integer membership oracle: z lies in center + p^k Z_p^d.
bool member(const Ball& b, const std::vector<std::int64_t>& z) {
  std::int64_t m = 1;
  for (int i = 0; i < b.level(); ++i) m *= b.prime();
  for (std::size_t i = 0; i < z.size(); ++i)
    if (((z[i] % m) + m) % m != b.center()[i]) return false;
  return true;
}

bool member(const Region& r, const std::vector<std::int64_t>& z) {
  for (const auto& b : r.balls())
    if (member(b, z)) return true;
  return false;
}

int count_members(const std::vector<Ball>& balls, const std::vector<std::int64_t>& z) {
  int n = 0;
  for (const auto& b : balls) n += member(b, z) ? 1 : 0;
  return n;
}

Ball b1(std::int64_t c, int k) { return Ball(3, {c}, k); }

Region random_region(Rng& rng, int p, int d) {
  std::vector<Ball> balls;
  const int n = static_cast<int>(rng.uniform(1, 4));
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(rng.uniform(0, 2));
    std::vector<std::int64_t> c(d);
    for (auto& ci : c) ci = rng.uniform(0, ipow(p, k) - 1);
    balls.emplace_back(p, c, k);
  }
  return Region(p, d, balls);
}

}  // namespace

TEST_CASE("ball relations") {
  CHECK(ball_relation(b1(0, 1), b1(1, 1)) == BallRelation::Disjoint);
  CHECK(ball_relation(b1(0, 0), b1(0, 1)) == BallRelation::FirstContainsSecond);
  CHECK(ball_relation(b1(0, 1), b1(0, 0)) == BallRelation::SecondContainsFirst);
  CHECK(ball_relation(b1(4, 2), b1(4, 2)) == BallRelation::Equal);
  CHECK(Ball(3, {10}, 2) == Ball(3, {1}, 2));
}

TEST_CASE("relations agree with exhaustive membership") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = trial % 2 ? 2 : 3;
    const int d = static_cast<int>(rng.uniform(1, 2));
    auto make = [&] {
      const int k = static_cast<int>(rng.uniform(0, 2));
      std::vector<std::int64_t> c(d);
      for (auto& ci : c) ci = rng.uniform(0, ipow(p, k) - 1);
      return Ball(p, c, k);
    };
    Ball a = make(), b = make();
    const int m = std::max(a.level(), b.level()) + 1;
    bool a_in_b = true, b_in_a = true, meet = false;
    for (const auto& z : level_points(p, d, m)) {
      const bool ia = member(a, z), ib = member(b, z);
      if (ia && !ib) a_in_b = false;
      if (ib && !ia) b_in_a = false;
      if (ia && ib) meet = true;
    }
    switch (ball_relation(a, b)) {
      case BallRelation::Equal: CHECK((a_in_b && b_in_a)); break;
      case BallRelation::Disjoint: CHECK_FALSE(meet); break;
      case BallRelation::FirstContainsSecond: CHECK((b_in_a && !a_in_b)); break;
      case BallRelation::SecondContainsFirst: CHECK((a_in_b && !b_in_a)); break;
    }
  }
}

TEST_CASE("decompose merges siblings and stays canonical") {
  CHECK(decompose(Region(Ball::unit(3, 1))) == std::vector<Ball>{b1(0, 0)});
  CHECK(decompose(Region(3, 1, {b1(0, 1), b1(1, 1), b1(2, 1)})) == std::vector<Ball>{b1(0, 0)});
  CHECK_THROWS_AS(decompose(Region(3, 1)), Error);

  Region ring = subtract(Region(Ball::unit(3, 1)), Region(b1(0, 1)));
  auto balls = decompose(ring);
  CHECK(balls == std::vector<Ball>{b1(1, 1), b1(2, 1)});
  for (const auto& z : level_points(3, 1, 3)) {
    const bool expected = z[0] % 3 != 0;
    CHECK(count_members(balls, z) == (expected ? 1 : 0));
  }
}

TEST_CASE("canonicalization is idempotent and preserves the point set") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = trial % 2 ? 2 : 3;
    const int d = static_cast<int>(rng.uniform(1, 2));
    std::vector<Ball> raw;
    for (int i = 0; i < 6; ++i) {
      const int k = static_cast<int>(rng.uniform(0, 2));
      std::vector<std::int64_t> c(d);
      for (auto& ci : c) ci = rng.uniform(0, ipow(p, k) - 1);
      raw.emplace_back(p, c, k);
    }
    Region r(p, d, raw);
    CHECK(Region(p, d, decompose(r)) == r);
    for (const auto& z : level_points(p, d, 3)) {
      CHECK(count_members(r.balls(), z) == (count_members(raw, z) > 0 ? 1 : 0));
    }
  }
}

TEST_CASE("subordinate partitions follow cover order") {
  Region Z3(Ball::unit(3, 1));
  {
    std::vector<Region> cover{Z3};
    auto parts = subordinate_partition(Z3, cover);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0] == AssignedBall{b1(0, 0), 0});
  }
  {
    std::vector<Region> cover{Region(b1(0, 1)), Z3};
    auto parts = subordinate_partition(Z3, cover);
    std::vector<AssignedBall> expected{{b1(0, 1), 0}, {b1(1, 1), 1}, {b1(2, 1), 1}};
    CHECK(parts == expected);
    for (const auto& z : level_points(3, 1, 2)) {
      int hits = 0;
      for (const auto& ab : parts) {
        if (!member(ab.ball, z)) continue;
        ++hits;
        CHECK(member(cover[ab.cover_index], z));
      }
      CHECK(hits == 1);
    }
  }
  {
    std::vector<Region> cover{Region(3, 1), Z3};
    auto parts = subordinate_partition(Z3, cover);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0] == AssignedBall{b1(0, 0), 1});
  }
  {
    std::vector<Region> cover{Region(b1(0, 1))};
    CHECK_THROWS_AS(subordinate_partition(Z3, cover), Error);
  }
}

TEST_CASE("random subordinate partitions are exact at level 3") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = trial % 3 == 0 ? 2 : 3;
    const int d = p == 2 ? 2 : 1;
    Region region = random_region(rng, p, d);
    std::vector<Region> cover;
    for (int i = 0; i < 3; ++i) cover.push_back(random_region(rng, p, d));
    cover.push_back(region);
    auto parts = subordinate_partition(region, cover);
    auto h = partition_of_unity(region, cover);
    for (const auto& z : level_points(p, d, 3)) {
      int hits = 0;
      for (const auto& ab : parts) {
        if (!member(ab.ball, z)) continue;
        ++hits;
        CHECK(member(cover[ab.cover_index], z));
      }
      CHECK(hits == (member(region, z) ? 1 : 0));
      int sum = 0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const bool in = member(h[i].support, z);
        sum += in ? 1 : 0;
        if (in) CHECK(member(cover[i], z));
      }
      CHECK(sum == (member(region, z) ? 1 : 0));
    }
  }
}

TEST_CASE("partition of unity") {
  PadicContext ctx(3, 12);
  Region Z3(Ball::unit(3, 1));
  std::vector<Region> cover{Region(b1(0, 1)), Z3};
  auto h = partition_of_unity(Z3, cover);
  REQUIRE(h.size() == 2);
  CHECK(h[0].support == Region(b1(0, 1)));
  CHECK(h[1].support == Region(3, 1, {b1(1, 1), b1(2, 1)}));
  for (const auto& z : level_points(3, 1, 3)) {
    PadicVector x = integer_vector(ctx, z);
    CHECK(h[0](x) + h[1](x) == 1);
  }
  std::vector<Region> self{Z3};
  CHECK(partition_of_unity(Z3, self)[0].support == Z3);
}

TEST_CASE("cutoff functions") {
  Region Z3(Ball::unit(3, 1));
  CHECK(cutoff(Z3, Z3).support == Z3);
  Region K(b1(0, 1));
  Indicator h = cutoff(K, Z3);
  CHECK(is_subset(K, h.support));

  Region U = subtract(Z3, Region(b1(2, 1)));
  Region K2(b1(0, 2));
  Indicator w = cutoff(K2, U);
  for (const auto& z : level_points(3, 1, 3)) {
    if (member(K2, z)) CHECK(member(w.support, z));
    if (z[0] % 3 == 2) CHECK_FALSE(member(w.support, z));
  }
  CHECK_THROWS_AS(cutoff(Z3, K), Error);
}
