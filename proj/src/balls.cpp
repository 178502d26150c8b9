// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/balls.hpp"

#include <algorithm>
#include <map>

namespace ucalc {

std::int64_t ipow(int p, int e) {
  if (e < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 62) / p) fail(ErrorKind::InvalidArgument, "ball level too fine for 64-bit centers");
    r *= p;
  }
  return r;
}

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Ball::Ball(int p, std::vector<std::int64_t> center, int level) : p_(p), center_(std::move(center)), k_(level) {
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "ball prime is not prime");
  if (level < 0) fail(ErrorKind::InvalidArgument, "ball level must be >= 0");
  const std::int64_t m = ipow(p, level);
  for (auto& c : center_) c = floor_mod(c, m);
}

Ball Ball::around(std::span<const Padic> x, int level) {
  if (x.empty()) fail(ErrorKind::InvalidArgument, "empty point");
  const int p = x[0].context().is_set() ? x[0].context().prime() : 0;
  std::vector<std::int64_t> c;
  int prime = p;
  for (const auto& xi : x) {
    if (xi.context().is_set()) prime = xi.context().prime();
    if (xi.valuation() < 0) fail(ErrorKind::OutOfDomain, "point is not integral");
    c.push_back(xi.is_zero() ? 0 : xi.residue(level).get_si());
  }
  if (prime == 0) fail(ErrorKind::InvalidArgument, "point without a context");
  return Ball(prime, std::move(c), level);
}

PadicVector Ball::center_vector(const PadicContext& ctx) const { return integer_vector(ctx, center_); }

bool Ball::contains(std::span<const Padic> x) const {
  if (static_cast<int>(x.size()) != dim()) fail(ErrorKind::InvalidArgument, "point dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].valuation() < 0) return false;
    if (x[i].is_zero()) {
      if (center_[i] != 0) return false;
      continue;
    }
    if (x[i].residue(k_).get_si() != center_[i]) return false;
  }
  return true;
}

bool Ball::contains(const Ball& other) const {
  if (other.p_ != p_ || other.dim() != dim()) fail(ErrorKind::InvalidArgument, "ball shape mismatch");
  if (other.k_ < k_) return false;
  const std::int64_t m = ipow(p_, k_);
  for (int i = 0; i < dim(); ++i)
    if (floor_mod(other.center_[i], m) != center_[i]) return false;
  return true;
}

Ball Ball::parent() const {
  if (k_ == 0) fail(ErrorKind::InvalidArgument, "O^d has no parent ball");
  return ancestor(k_ - 1);
}

Ball Ball::ancestor(int level) const {
  if (level > k_) fail(ErrorKind::InvalidArgument, "ancestor level finer than the ball");
  return Ball(p_, center_, level);
}

std::vector<Ball> Ball::children() const {
  const int d = dim();
  const std::int64_t step = ipow(p_, k_);
  std::vector<Ball> out;
  const std::int64_t count = ipow(p_, d);
  for (std::int64_t idx = 0; idx < count; ++idx) {
    std::vector<std::int64_t> c = center_;
    std::int64_t rest = idx;
    for (int i = 0; i < d; ++i) {
      c[i] += (rest % p_) * step;
      rest /= p_;
    }
    out.emplace_back(p_, std::move(c), k_ + 1);
  }
  return out;
}

bool operator<(const Ball& a, const Ball& b) {
  if (a.k_ != b.k_) return a.k_ < b.k_;
  return a.center_ < b.center_;
}

std::string Ball::to_string() const {
  std::string s = "B(";
  for (std::size_t i = 0; i < center_.size(); ++i) s += (i ? "," : "") + std::to_string(center_[i]);
  return s + "; k=" + std::to_string(k_) + ")";
}

BallRelation ball_relation(const Ball& a, const Ball& b) {
  if (a == b) return BallRelation::Equal;
  if (a.contains(b)) return BallRelation::FirstContainsSecond;
  if (b.contains(a)) return BallRelation::SecondContainsFirst;
  return BallRelation::Disjoint;
}

Region::Region(int p, int d, std::vector<Ball> balls) : p_(p), d_(d), balls_(std::move(balls)) {
  for (const auto& b : balls_)
    if (b.prime() != p || b.dim() != d) fail(ErrorKind::InvalidArgument, "ball does not match region shape");
  canonicalize();
}

void Region::canonicalize() {
  std::sort(balls_.begin(), balls_.end());
  balls_.erase(std::unique(balls_.begin(), balls_.end()), balls_.end());
  // Coarser balls come first, so a single sweep drops every contained ball.
  std::vector<Ball> kept;
  for (const auto& b : balls_) {
    bool inside = std::any_of(kept.begin(), kept.end(), [&](const Ball& k) { return k.contains(b); });
    if (!inside) kept.push_back(b);
  }
  const std::size_t full = static_cast<std::size_t>(ipow(p_, d_));
  bool merged = true;
  while (merged) {
    merged = false;
    std::map<Ball, std::size_t> groups;
    for (const auto& b : kept)
      if (b.level() > 0) ++groups[b.parent()];
    for (const auto& [parent, count] : groups) {
      if (count != full) continue;
      std::erase_if(kept, [&](const Ball& b) { return b.level() > 0 && b.parent() == parent; });
      kept.push_back(parent);
      merged = true;
    }
  }
  std::sort(kept.begin(), kept.end());
  balls_ = std::move(kept);
}

int Region::finest_level() const {
  int m = 0;
  for (const auto& b : balls_) m = std::max(m, b.level());
  return m;
}

bool Region::contains(std::span<const Padic> x) const {
  return std::any_of(balls_.begin(), balls_.end(), [&](const Ball& b) { return b.contains(x); });
}

namespace {

void check_shape(const Region& a, const Region& b) {
  if (a.prime() != b.prime() || a.dim() != b.dim()) fail(ErrorKind::InvalidArgument, "region shape mismatch");
}

// a minus b as disjoint balls.
std::vector<Ball> carve(const Ball& a, const Ball& b) {
  switch (ball_relation(a, b)) {
    case BallRelation::Disjoint: return {a};
    case BallRelation::Equal:
    case BallRelation::SecondContainsFirst: return {};
    case BallRelation::FirstContainsSecond: break;
  }
  std::vector<Ball> out;
  Ball cur = a;
  while (cur.level() < b.level()) {
    Ball next = b.ancestor(cur.level() + 1);
    for (auto& c : cur.children())
      if (!(c == next)) out.push_back(std::move(c));
    cur = next;
  }
  return out;
}

}  // namespace

Region region_union(const Region& a, const Region& b) {
  check_shape(a, b);
  std::vector<Ball> all = a.balls();
  all.insert(all.end(), b.balls().begin(), b.balls().end());
  return Region(a.prime(), a.dim(), std::move(all));
}

Region intersect(const Region& a, const Region& b) {
  check_shape(a, b);
  std::vector<Ball> out;
  for (const auto& x : a.balls()) {
    for (const auto& y : b.balls()) {
      switch (ball_relation(x, y)) {
        case BallRelation::Equal:
        case BallRelation::SecondContainsFirst: out.push_back(x); break;
        case BallRelation::FirstContainsSecond: out.push_back(y); break;
        case BallRelation::Disjoint: break;
      }
    }
  }
  return Region(a.prime(), a.dim(), std::move(out));
}

Region subtract(const Region& a, const Region& b) {
  check_shape(a, b);
  std::vector<Ball> rest = a.balls();
  for (const auto& y : b.balls()) {
    std::vector<Ball> next;
    for (const auto& x : rest) {
      auto pieces = carve(x, y);
      next.insert(next.end(), pieces.begin(), pieces.end());
    }
    rest = std::move(next);
  }
  return Region(a.prime(), a.dim(), std::move(rest));
}

bool is_subset(const Region& a, const Region& b) { return subtract(a, b).empty(); }

std::vector<Ball> decompose(const Region& region) {
  if (region.empty()) fail(ErrorKind::EmptyRegion, "cannot decompose the empty region");
  return region.balls();
}

std::vector<AssignedBall> subordinate_partition(const Region& region, std::span<const Region> cover) {
  std::vector<AssignedBall> out;
  Region remaining = region;
  for (std::size_t i = 0; i < cover.size() && !remaining.empty(); ++i) {
    if (cover[i].empty()) continue;
    Region taken = intersect(remaining, cover[i]);
    for (const auto& b : taken.balls()) out.push_back({b, i});
    remaining = subtract(remaining, cover[i]);
  }
  if (!remaining.empty())
    fail(ErrorKind::CoverIncomplete, "cover misses " + remaining.balls().front().to_string());
  return out;
}

std::vector<Indicator> partition_of_unity(const Region& region, std::span<const Region> cover) {
  std::vector<std::vector<Ball>> parts(cover.size());
  for (const auto& ab : subordinate_partition(region, cover)) parts[ab.cover_index].push_back(ab.ball);
  std::vector<Indicator> out;
  for (auto& balls : parts) out.push_back({Region(region.prime(), region.dim(), std::move(balls))});
  return out;
}

Indicator cutoff(const Region& K, const Region& U) {
  if (!is_subset(K, U)) fail(ErrorKind::NotContained, "K is not contained in U");
  std::vector<Ball> widened;
  for (const auto& b : K.balls()) {
    Ball w = b;
    for (int level = 0; level <= b.level(); ++level) {
      Ball a = b.ancestor(level);
      if (is_subset(Region(a), U)) {
        w = a;
        break;
      }
    }
    widened.push_back(w);
  }
  return {Region(K.prime(), K.dim(), std::move(widened))};
}

std::vector<std::vector<std::int64_t>> level_points(int p, int d, int m) {
  const std::int64_t q = ipow(p, m);
  const std::int64_t count = ipow(p, d * m);
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t idx = 0; idx < count; ++idx) {
    std::vector<std::int64_t> pt(d);
    std::int64_t rest = idx;
    for (int i = 0; i < d; ++i) {
      pt[i] = rest % q;
      rest /= q;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace ucalc
