// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ucalc/rng.hpp"
#include "ucalc/weakprod.hpp"

using namespace ucalc;

namespace {

const PadicContext c3(3, 12);
const PadicContext c2(2, 12);

Padic I(std::int64_t n, const PadicContext& ctx = c3) { return Padic::from_integer(ctx, n); }

std::vector<Ball> level_balls(int p, int level) {
  std::vector<Ball> out;
  for (std::int64_t c = 0; c < ipow(p, level); ++c) out.emplace_back(p, std::vector<std::int64_t>{c}, level);
  return out;
}

Region union_of(const std::set<Ball>& balls) {
  const Ball& b = *balls.begin();
  return Region(b.prime(), b.dim(), std::vector<Ball>(balls.begin(), balls.end()));
}

Permutation perm(const BallProduct& x, const PadicContext& ctx, int L) {
  return region_permutation(union_of(x.index()), L,
                            [&](std::span<const Padic> z) { return apply(x, ctx, z, L); }, ctx);
}

BallProduct random_element(const PadicContext& ctx, const std::vector<Ball>& balls, Rng& rng, int support) {
  BallProduct x(std::set<Ball>(balls.begin(), balls.end()));
  for (int s = 0; s < support; ++s) {
    const Ball& b = balls[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(balls.size()) - 1))];
    x.set(b, DiffeoWord(random_diffeo(ctx, b, rng, 2, 1, 1)));
  }
  return x;
}

}  // namespace

TEST_CASE("weak product multiplication") {
  Rng rng(1);
  auto balls = level_balls(3, 1);
  BallProduct e(std::set<Ball>(balls.begin(), balls.end()));
  auto a = random_element(c3, balls, rng, 2);
  CHECK(perm(a * e, c3, 4) == perm(a, c3, 4));
  CHECK(perm(e * a, c3, 4) == perm(a, c3, 4));

  // Disjoint supports.
  BallProduct x(e.index()), y(e.index());
  x.set(balls[0], DiffeoWord(random_diffeo(c3, balls[0], rng, 2)));
  y.set(balls[2], DiffeoWord(random_diffeo(c3, balls[2], rng, 2)));
  auto xy = x * y;
  CHECK(xy.entries().size() == 2);
  CHECK(xy.find(balls[0])->induced(c3, 3) == x.find(balls[0])->induced(c3, 3));
  CHECK(xy.find(balls[2])->induced(c3, 3) == y.find(balls[2])->induced(c3, 3));

  // Overlapping support on one ball.
  BallProduct z(e.index());
  z.set(balls[0], DiffeoWord(random_diffeo(c3, balls[0], rng, 2)));
  auto xz = x * z;
  CHECK(xz.find(balls[0])->induced(c3, 2) ==
        compose_permutations(x.find(balls[0])->induced(c3, 2), z.find(balls[0])->induced(c3, 2)));

  CHECK_THROWS_AS(x.set(Ball(3, {0}, 2), DiffeoWord(Ball(3, {0}, 2))), Error);
  CHECK_THROWS_AS(x.set(balls[0], DiffeoWord(random_diffeo(c3, balls[1], rng, 2))), Error);
}

TEST_CASE("group axioms over eight balls") {
  Rng rng(8);
  for (int p : {2, 3}) {
    const PadicContext& ctx = p == 2 ? c2 : c3;
    auto balls = level_balls(p, p == 2 ? 3 : 2);
    if (balls.size() > 8) balls.resize(8);
    const int L = balls.front().level() + 3;
    for (int trial = 0; trial < 3; ++trial) {
      auto a = random_element(ctx, balls, rng, 3);
      auto b = random_element(ctx, balls, rng, 3);
      auto c = random_element(ctx, balls, rng, 3);
      CHECK(perm((a * b) * c, ctx, L) == perm(a * (b * c), ctx, L));
      CHECK((a * a.inverse()).is_identity());
      CHECK((a.inverse() * a).is_identity());
      CHECK(perm(a * b * b.inverse(), ctx, L) == perm(a, ctx, L));
      CHECK(perm(a * b, ctx, L) == compose_permutations(perm(a, ctx, L), perm(b, ctx, L)));
      CHECK(is_identity_permutation(compose_permutations(perm(a, ctx, L), perm(a.inverse(), ctx, L))));
    }
  }
}

TEST_CASE("regroup and flatten") {
  Rng rng(12);
  // Coarse balls i of level 1 in Z_3, fibers: their children.
  std::map<Ball, std::vector<Ball>> fibers;
  std::set<std::pair<Ball, Ball>> K;
  for (const auto& i : level_balls(3, 1)) {
    fibers[i] = i.children();
    for (const auto& j : fibers[i]) K.emplace(i, j);
  }
  using Flat = WeakProduct<std::pair<Ball, Ball>, DiffeoWord>;
  auto sample = [&] {
    Flat x(K);
    for (int s = 0; s < 3; ++s) {
      auto it = K.begin();
      std::advance(it, rng.uniform(0, static_cast<std::int64_t>(K.size()) - 1));
      x.set(*it, DiffeoWord(random_diffeo(c3, it->second, rng, 2, 1, 1)));
    }
    return x;
  };
  auto same = [](const Flat& a, const Flat& b) {
    for (const auto& k : a.index()) {
      const DiffeoWord* u = a.find(k);
      const DiffeoWord* v = b.find(k);
      Permutation pu = u ? u->induced(c3, 2) : induced_level_map(CertifiedDiffeo::identity(c3, k.second), 2);
      Permutation pv = v ? v->induced(c3, 2) : induced_level_map(CertifiedDiffeo::identity(c3, k.second), 2);
      if (pu != pv) return false;
    }
    return true;
  };
  for (int trial = 0; trial < 5; ++trial) {
    auto x = sample(), y = sample();
    auto lhs = regroup(x * y, fibers);
    auto rhs = regroup(x, fibers) * regroup(y, fibers);
    CHECK(same(flatten(lhs, fibers), flatten(rhs, fibers)));
    CHECK(same(flatten(regroup(x, fibers), fibers), x));
    CHECK(lhs.index() == rhs.index());
  }
  Flat empty(K);
  CHECK(regroup(empty, fibers).is_identity());

  // Singleton fibers.
  std::map<int, std::vector<int>> single{{0, {0}}, {1, {0}}};
  WeakProduct<std::pair<int, int>, DiffeoWord> s({{0, 0}, {1, 0}});
  CHECK(regroup(s, single).index() == std::set<int>{0, 1});

  std::map<Ball, std::vector<Ball>> broken = fibers;
  broken.begin()->second.pop_back();
  CHECK_THROWS_AS(regroup(sample(), broken), Error);
}

TEST_CASE("relabeling by affine conjugation") {
  Rng rng(4);
  auto balls = level_balls(3, 1);
  std::set<Ball> index(balls.begin(), balls.end());
  // pi(j) = j + 1 mod 3, beta_j conjugation by x -> j + 2(x - pi(j)).
  std::map<Ball, Ball> pi, pinv;
  std::map<Ball, AffineIsometry> psi;
  for (int j = 0; j < 3; ++j) {
    pi[balls[j]] = balls[(j + 1) % 3];
    pinv[balls[(j + 1) % 3]] = balls[j];
    psi[balls[j]] = AffineIsometry{balls[(j + 1) % 3], balls[j], I(2)};
  }
  std::function<DiffeoWord(const Ball&, const DiffeoWord&)> beta = [&](const Ball& j, const DiffeoWord& w) {
    return conjugate_affine(w, psi.at(j));
  };
  std::function<DiffeoWord(const Ball&, const DiffeoWord&)> beta_inv = [&](const Ball& i, const DiffeoWord& w) {
    return conjugate_affine(w, psi.at(pinv.at(i)).inverse());
  };
  for (int trial = 0; trial < 4; ++trial) {
    auto x = random_element(c3, balls, rng, 2), y = random_element(c3, balls, rng, 2);
    auto lhs = relabel(x * y, pi, beta);
    auto rhs = relabel(x, pi, beta) * relabel(y, pi, beta);
    CHECK(perm(lhs, c3, 4) == perm(rhs, c3, 4));
    auto back = relabel(relabel(x, pi, beta), pinv, beta_inv);
    CHECK(perm(back, c3, 4) == perm(x, c3, 4));
  }
  // Identity relabeling and pure permutations.
  auto x = random_element(c3, balls, rng, 2);
  std::map<Ball, Ball> id;
  for (const auto& b : balls) id[b] = b;
  std::function<DiffeoWord(const Ball&, const DiffeoWord&)> keep = [](const Ball&, const DiffeoWord& w) { return w; };
  CHECK(perm(relabel(x, id, keep), c3, 4) == perm(x, c3, 4));
  std::map<Ball, Ball> bad = id;
  bad[balls[0]] = balls[1];
  CHECK_THROWS_AS(relabel(x, bad, keep), Error);
}

TEST_CASE("finitely supported direct sums") {
  Region Z3(Ball::unit(3, 1));
  std::map<int, FunctionModel> fs;
  for (int i = 0; i < 5; ++i) {
    Poly q(c3, 1);
    q.add_term({1}, I(i + 1));
    q.add_term({2}, I(3));
    fs.emplace(i, FunctionModel::uniform(c3, Z3, {q}));
  }
  SparseTuple<int> x{{1, {I(4)}}, {3, {I(-2)}}};
  auto y = oplus_apply(fs, {}, x);
  REQUIRE(y.size() == 2);
  CHECK(y.at(1)[0] == I(2 * 4 + 3 * 16));
  CHECK(y.at(3)[0] == I(4 * -2 + 3 * 4));
  CHECK(oplus_apply(fs, {}, SparseTuple<int>{}).empty());

  // An exceptional index with f(0) != 0 joins the support.
  fs.at(4) = FunctionModel::uniform(c3, Z3, {Poly::constant(c3, 1, I(7))});
  CHECK_THROWS_AS(oplus_apply(fs, {}, x), Error);
  auto z = oplus_apply(fs, {4}, x);
  CHECK(z.size() == 3);
  CHECK(z.at(4)[0] == I(7));

  // Parameter form: f_i(x, p) = x p + 3 x^2.
  std::map<int, FunctionModel> gs;
  Region Z3sq(Ball::unit(3, 2));
  for (int i = 0; i < 3; ++i) {
    Poly q(c3, 2);
    q.add_term({1, 1}, I(1));
    q.add_term({2, 0}, I(3 * (i + 1)));
    gs.emplace(i, FunctionModel::uniform(c3, Z3sq, {q}));
  }
  auto w = oplus_apply(gs, {}, SparseTuple<int>{{2, {I(5)}}}, PadicVector{I(2)});
  REQUIRE(w.size() == 1);
  CHECK(w.at(2)[0] == I(10 + 9 * 25));
  Poly bad(c3, 2);
  bad.add_term({0, 1}, I(1));
  gs.at(0) = FunctionModel::uniform(c3, Z3sq, {bad});
  CHECK_THROWS_AS(oplus_apply(gs, {}, SparseTuple<int>{}, PadicVector{I(2)}), Error);
}

TEST_CASE("conjugation by a global map") {
  Rng rng(21);
  auto balls = level_balls(3, 1);
  std::set<Ball> index(balls.begin(), balls.end());
  Region Z3(Ball::unit(3, 1));
  // gamma swaps 0+3Z and 1+3Z affinely and twists 2+3Z by a diffeo.
  std::vector<GlobalPiece> pieces{
      {AffineIsometry{balls[0], balls[1], I(2)}, DiffeoWord(balls[0])},
      {AffineIsometry{balls[1], balls[0], I(1)}, DiffeoWord(random_diffeo(c3, balls[1], rng, 2))},
      {AffineIsometry{balls[2], balls[2], I(1)}, DiffeoWord(random_diffeo(c3, balls[2], rng, 2))},
  };
  auto gamma = GlobalDiffeo::make(c3, pieces);
  const int L = 3;
  auto gperm = region_permutation(Z3, L, [&](std::span<const Padic> z) { return gamma.eval(z, L); }, c3);
  auto ginv = region_permutation(Z3, L, [&](std::span<const Padic> z) { return gamma.eval_inverse(z, L); }, c3);
  CHECK(is_identity_permutation(compose_permutations(gperm, ginv)));

  for (int trial = 0; trial < 4; ++trial) {
    auto eta = random_element(c3, balls, rng, 1 + trial % 2);
    auto conj = conjugate_global(gamma, eta);
    CHECK(perm(conj, c3, L) == compose_permutations(gperm, compose_permutations(perm(eta, c3, L), ginv)));
    auto eta2 = random_element(c3, balls, rng, 2);
    CHECK(perm(conjugate_global(gamma, eta * eta2), c3, L) ==
          perm(conjugate_global(gamma, eta) * conjugate_global(gamma, eta2), c3, L));
  }

  // Identity global map.
  std::vector<GlobalPiece> idp;
  for (const auto& b : balls) idp.push_back({AffineIsometry{b, b, I(1)}, DiffeoWord(b)});
  auto idg = GlobalDiffeo::make(c3, idp);
  auto eta = random_element(c3, balls, rng, 2);
  CHECK(perm(conjugate_global(idg, eta), c3, L) == perm(eta, c3, L));

  BallProduct wrong(std::set<Ball>{Ball::unit(3, 1)});
  CHECK_THROWS_AS(conjugate_global(gamma, wrong), Error);
  std::vector<GlobalPiece> overlap{{AffineIsometry{balls[0], balls[1], I(1)}, DiffeoWord(balls[0])},
                                   {AffineIsometry{balls[1], balls[1], I(1)}, DiffeoWord(balls[1])}};
  CHECK_THROWS_AS(GlobalDiffeo::make(c3, overlap), Error);
}
