// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ucalc/calculus.hpp"
#include "ucalc/diffeo.hpp"
#include "ucalc/rng.hpp"

using namespace ucalc;

namespace {

const PadicContext c3(3, 12);
const PadicContext c2(2, 12);

Padic I(std::int64_t n, const PadicContext& ctx = c3) { return Padic::from_integer(ctx, n); }
PadicVector V(std::initializer_list<std::int64_t> xs, const PadicContext& ctx = c3) {
  PadicVector out;
  for (auto x : xs) out.push_back(I(x, ctx));
  return out;
}

Ball Z3() { return Ball::unit(3, 1); }

// sigma(x) = sum_n coeffs[n] x^n on one ball.
FunctionModel poly1(const Ball& b, std::vector<std::int64_t> coeffs) {
  Poly q(c3, 1);
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    if (coeffs[n]) q.add_term({static_cast<int>(n)}, I(coeffs[n]));
  return FunctionModel::uniform(c3, Region(b), {q});
}

CertifiedDiffeo diffeo1(std::vector<std::int64_t> coeffs) {
  return CertifiedDiffeo::certify(BallEndo::make(Z3(), poly1(Z3(), std::move(coeffs))));
}

// Integer valuation oracle.
long vp(mpq_class q, long p) {
  if (q == 0) return 1000;
  long v = 0;
  mpz_class n = q.get_num(), d = q.get_den();
  while (n % p == 0) n /= p, ++v;
  while (d % p == 0) d /= p, --v;
  return v;
}

}  // namespace

TEST_CASE("threshold constant") {
  CHECK(omega_threshold(2) == 2);
  CHECK(omega_threshold(3) == 1);
  CHECK(omega_threshold(5) == 1);
}

TEST_CASE("identity and small quadratics certify") {
  auto id = CertifiedDiffeo::certify(BallEndo::identity(c3, Z3()));
  CHECK(id.certificate().method == OmegaMethod::CoefficientBound);
  auto g = diffeo1({0, 0, 3});
  CHECK(g.certificate().v_min == 1);

  // Brute-force oracle for 3x^2: every quotient (s(x+ty)-s(x))/t lies in 3Z_3
  // for x, y mod 27 and t = u 3^a.
  for (long x = 0; x < 27; ++x)
    for (long y = 0; y < 27; ++y)
      for (long t : {1L, 2L, 3L, 6L, 9L, 18L, 27L}) {
        mpq_class a = 3 * mpq_class(x * x), b = 3 * mpq_class((x + t * y) * (x + t * y));
        CHECK(vp((b - a) / t, 3) >= 1);
      }
}

TEST_CASE("unit-norm quotient is rejected with a witness") {
  BallEndo e = BallEndo::make(Z3(), poly1(Z3(), {0, 1}));
  auto r = try_certify_omega(e, 3);
  REQUIRE_FALSE(r.certified);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition == "quotient");
  CHECK(r.witness->valuation < 1);
  // Recompute the quotient at the witness independently.
  PadicVector s = e.sigma().eval(r.witness->x + r.witness->t * r.witness->y);
  PadicVector s0 = e.sigma().eval(r.witness->x);
  if (!r.witness->t.is_zero()) {
    PadicVector q = r.witness->t.inverse() * (s - s0);
    CHECK(norm_max(q) == r.witness->valuation);
  } else {
    CHECK(norm_max(r.witness->y) == r.witness->valuation);
  }
  CHECK_THROWS_AS(certify_omega(e, 3), Error);
}

TEST_CASE("translations") {
  CHECK_NOTHROW(diffeo1({3}));
  BallEndo unit = BallEndo::make(Z3(), poly1(Z3(), {1}));
  auto r = try_certify_omega(unit, 3);
  CHECK_FALSE(r.certified);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition == "range");
  // p = 2 needs displacement in 4Z_2.
  Ball Z2 = Ball::unit(2, 1);
  auto t2 = FunctionModel::constant(c2, Region(Z2), V({2}, c2));
  CHECK_FALSE(try_certify_omega(BallEndo::make(Z2, t2), 3).certified);
  auto t4 = FunctionModel::constant(c2, Region(Z2), V({4}, c2));
  CHECK(try_certify_omega(BallEndo::make(Z2, t4), 3).certified);
}

TEST_CASE("range check for ball endomorphisms") {
  Ball b(3, {1}, 1);
  auto sigma = FunctionModel::constant(c3, Region(b), V({1}));
  CHECK_THROWS_AS(BallEndo::make(b, sigma), Error);
}

TEST_CASE("piecewise displacements use the exhaustive method") {
  std::vector<Piece> pieces;
  for (int c = 0; c < 3; ++c) {
    Poly q(c3, 1);
    q.add_term({2}, I(3 * (c + 1)));
    q.add_term({0}, I(3 * c));
    pieces.push_back({Ball(3, {c}, 1), {q}});
  }
  auto g = CertifiedDiffeo::certify(BallEndo::make(Z3(), FunctionModel(c3, 1, 1, pieces)));
  CHECK(g.certificate().method == OmegaMethod::Exhaustive);
  CHECK(g.certificate().level == 3);
}

TEST_CASE("jumps between nearby pieces fail the Lipschitz test") {
  // Pieces 0+9Z, 3+9Z, 6+9Z, 1+3Z, 2+3Z; a jump of 3 across distance 3.
  std::vector<Piece> pieces;
  for (int c : {0, 3, 6}) pieces.push_back({Ball(3, {c}, 2), {Poly::constant(c3, 1, I(c == 3 ? 3 : 0))}});
  for (int c : {1, 2}) pieces.push_back({Ball(3, {c}, 1), {Poly(c3, 1)}});
  BallEndo e = BallEndo::make(Z3(), FunctionModel(c3, 1, 1, pieces));
  auto r = try_certify_omega(e, 3);
  REQUIRE_FALSE(r.certified);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition == "lipschitz");
  const auto& w = *r.witness;
  PadicVector q = w.t.inverse() * (e.sigma().eval(w.x + w.t * w.y) - e.sigma().eval(w.x));
  CHECK(norm_max(q) == w.valuation);
  CHECK(w.valuation < 1);

  // A jump of 9 across distance 3 is fine.
  pieces[1].components[0] = Poly::constant(c3, 1, I(9));
  CHECK(try_certify_omega(BallEndo::make(Z3(), FunctionModel(c3, 1, 1, pieces)), 3).certified);
}

TEST_CASE("certified maps are isometries") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const bool two = trial % 2;
    const PadicContext& ctx = two ? c2 : c3;
    Ball B = two ? Ball::unit(2, 2) : Z3();
    auto g = random_diffeo(ctx, B, rng, 3);
    std::vector<std::pair<PadicVector, PadicVector>> pairs;
    for (int i = 0; i < 200; ++i) pairs.emplace_back(random_point(ctx, B, rng, 6), random_point(ctx, B, rng, 6));
    auto rep = isometry_check(g, pairs);
    CHECK(rep.checked == 200);
    CHECK(rep.violations.empty());
  }
  auto g = diffeo1({0, 0, 3});
  std::vector<std::pair<PadicVector, PadicVector>> pairs;
  for (int x = 0; x < 30; ++x)
    for (int y = 0; y < 30; ++y) pairs.emplace_back(V({x}), V({y}));
  CHECK(isometry_check(g, pairs).violations.empty());
}

TEST_CASE("inversion by iteration") {
  int steps = 0;
  auto id = CertifiedDiffeo::identity(c3, Z3());
  CHECK(invert_at(id, V({5}), 12, &steps) == V({5}));
  CHECK(steps == 1);

  auto shift3 = diffeo1({3});
  auto x = invert_at(shift3, V({1}), 12);
  CHECK(difference_valuation(x, V({-2})) >= 12);

  auto g = diffeo1({0, 0, 3});
  auto r = invert_at(g, V({1}), 12, &steps);
  CHECK(steps <= inversion_budget(12, 1));
  // Residual oracle: x + 3x^2 - 1 divisible by 3^12.
  mpz_class xi = r[0].numerator();
  mpz_class res = xi + 3 * xi * xi - 1;
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), 3, 12);
  CHECK(res % m == 0);
}

TEST_CASE("random inversions meet the residual bound") {
  Rng rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    const bool two = trial % 2;
    const PadicContext& ctx = two ? c2 : c3;
    Ball B = two ? Ball::unit(2, 2) : Z3();
    auto g = random_diffeo(ctx, B, rng, 3);
    for (int i = 0; i < 20; ++i) {
      auto y = random_point(ctx, B, rng, 8);
      int steps = 0;
      auto x = invert_at(g, y, 12, &steps);
      CHECK(difference_valuation(g.eval(x), y) >= 12);
      CHECK(steps <= inversion_budget(12, g.v_min()));
    }
  }
}

TEST_CASE("induced level maps") {
  auto id = CertifiedDiffeo::identity(c3, Z3());
  CHECK(is_identity_permutation(induced_level_map(id, 2)));
  auto t = diffeo1({3});
  auto perm = induced_level_map(t, 2);
  CHECK(perm == Permutation{3, 4, 5, 6, 7, 8, 0, 1, 2});
  // Three 3-cycles.
  std::vector<bool> seen(9);
  int cycles = 0;
  for (int i = 0; i < 9; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = static_cast<int>(perm[j])) seen[j] = true, ++len;
    CHECK(len == 3);
    ++cycles;
  }
  CHECK(cycles == 3);
  CHECK(is_identity_permutation(induced_level_map(diffeo1({0, 0, 3}), 1)));
}

TEST_CASE("composition of diffeos") {
  auto t = diffeo1({3});
  auto tt = compose_diffeos(t, t);
  CHECK(tt.sigma().eval(V({7}))[0] == I(6));
  auto g = diffeo1({0, 3, 3});
  auto id = CertifiedDiffeo::identity(c3, Z3());
  CHECK(induced_level_map(compose_diffeos(g, id), 3) == induced_level_map(g, 3));
  CHECK(induced_level_map(compose_diffeos(id, g), 3) == induced_level_map(g, 3));

  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const bool two = trial % 2;
    const PadicContext& ctx = two ? c2 : c3;
    Ball B = two ? Ball::unit(2, 2) : Z3();
    auto g1 = random_diffeo(ctx, B, rng, 2);
    auto g2 = random_diffeo(ctx, B, rng, 2);
    auto h = compose_diffeos(g1, g2);
    for (int m = 1; m <= 3; ++m)
      CHECK(induced_level_map(h, m) == compose_permutations(induced_level_map(g1, m), induced_level_map(g2, m)));
    // Pointwise oracle.
    for (int i = 0; i < 10; ++i) {
      auto x = random_point(ctx, B, rng, 5);
      CHECK(h.eval(x) == g1.eval(g2.eval(x)));
    }
  }
}

TEST_CASE("preimages of balls are balls of the same level") {
  Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const bool two = trial % 2;
    const PadicContext& ctx = two ? c2 : c3;
    Ball B = two ? Ball::unit(2, 2) : Z3();
    auto g = random_diffeo(ctx, B, rng, 3);
    for (const auto& b : random_partition(B, rng, 3, 2)) {
      Ball pre = preimage_ball(g, b);
      CHECK(pre.level() == b.level());
      for (const auto& z : level_points(B.prime(), B.dim(), b.level() + 1)) {
        PadicVector x = integer_vector(ctx, z);
        CHECK(b.contains(g.eval(x)) == pre.contains(x));
      }
    }
  }
}

TEST_CASE("words and inverses") {
  Rng rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const bool two = trial % 2;
    const PadicContext& ctx = two ? c2 : c3;
    Ball B = two ? Ball::unit(2, 2) : Z3();
    DiffeoWord g(random_diffeo(ctx, B, rng, 3));
    DiffeoWord h(random_diffeo(ctx, B, rng, 3));
    CHECK((g * g.inverse()).is_identity());
    // Build a word that does not cancel syntactically.
    DiffeoWord w = g * h;
    DiffeoWord winv = h.inverse() * g.inverse();
    for (int m = 1; m <= 3; ++m) {
      CHECK(is_identity_permutation(compose_permutations(w.induced(ctx, m), winv.induced(ctx, m))));
      CHECK(w.induced(ctx, m) == compose_permutations(g.induced(ctx, m), h.induced(ctx, m)));
      CHECK(g.inverse().induced(ctx, m) == invert_permutation(g.induced(ctx, m)));
    }
  }
}

TEST_CASE("affine conjugation") {
  Ball C(3, {1}, 1), D(3, {2}, 1);
  Poly q(c3, 1);
  q.add_term({2}, I(3));
  q.add_term({0}, I(-3));
  auto g = CertifiedDiffeo::certify(BallEndo::make(C, FunctionModel::uniform(c3, Region(C), {q})));
  AffineIsometry psi{C, D, I(2)};
  auto h = conjugate_affine(g, psi);
  CHECK(h.ball() == D);
  for (int z = 0; z < 27; ++z) {
    PadicVector x = V({2 + 3 * z});
    CHECK(h.eval(x) == psi.apply(g.eval(psi.apply_inverse(x))));
  }
  CHECK_THROWS_AS(conjugate_affine(g, AffineIsometry{C, D, I(3)}), Error);
}

TEST_CASE("compactly supported endomorphisms") {
  // U = Z_3 made of 0+3Z_3, 1+3Z_3, 2+3Z_3; translation by 3 on 1+3Z_3 only.
  Region U(Z3());
  std::vector<Piece> pieces;
  for (int c = 0; c < 3; ++c) pieces.push_back({Ball(3, {c}, 1), {Poly::constant(c3, 1, I(c == 1 ? 3 : 0))}});
  auto a = CompactlySupportedEndo::make(U, FunctionModel(c3, 1, 1, pieces));
  CHECK(a.support() == Region(Ball(3, {1}, 1)));
  auto aa = endo_compose(a, a);
  for (int z = 0; z < 27; ++z) CHECK(aa.sigma().eval(V({z}))[0] == I(z % 3 == 1 ? 6 : 0));

  auto id = CompactlySupportedEndo::identity(c3, U);
  CHECK(id.support().empty());
  for (int z = 0; z < 27; ++z) {
    CHECK(endo_compose(a, id).eval(V({z})) == a.eval(V({z})));
    CHECK(endo_compose(id, a).eval(V({z})) == a.eval(V({z})));
  }

  // A displacement that leaves its ball is refused.
  Region V2(3, 1, {Ball(3, {0}, 1), Ball(3, {1}, 1)});
  std::vector<Piece> two{{Ball(3, {0}, 1), {Poly::constant(c3, 1, I(1))}}, {Ball(3, {1}, 1), {Poly(c3, 1)}}};
  CHECK_THROWS_AS(CompactlySupportedEndo::make(V2, FunctionModel(c3, 1, 1, two)), Error);
}

TEST_CASE("mu is associative on samples") {
  Rng rng(3);
  Region U(3, 1, {Ball(3, {0}, 1), Ball(3, {2}, 2)});
  auto make = [&] {
    std::vector<Piece> pcs;
    for (const auto& b : U.balls())
      pcs.push_back({b, {random_poly(c3, 1, 2, rng, b.level() + 1)}});
    return CompactlySupportedEndo::make(U, FunctionModel(c3, 1, 1, pcs));
  };
  for (int trial = 0; trial < 5; ++trial) {
    auto a = make(), b = make(), c = make();
    auto left = endo_compose(endo_compose(a, b), c);
    auto right = endo_compose(a, endo_compose(b, c));
    for (const auto& z : region_points(U, 3)) {
      PadicVector x = integer_vector(c3, z);
      CHECK(left.eval(x) == right.eval(x));
      CHECK(left.eval(x) == a.eval(b.eval(c.eval(x))));
    }
  }
}

TEST_CASE("membership in the compactly supported group") {
  Region U(Z3());
  auto id = CompactlySupportedEndo::identity(c3, U);
  auto d0 = diffc_membership(id);
  CHECK(d0.accepted);
  CHECK(d0.certificates.empty());

  std::vector<Piece> pieces;
  for (int c = 0; c < 3; ++c) {
    Poly q(c3, 1);
    if (c != 0) {
      q.add_term({2}, I(9));
      q.add_term({0}, I(9 * c));
    }
    pieces.push_back({Ball(3, {c}, 1), {q}});
  }
  auto a = CompactlySupportedEndo::make(U, FunctionModel(c3, 1, 1, pieces));
  auto d = diffc_membership(a);
  REQUIRE(d.accepted);
  CHECK(d.certificates.size() == 2);
  // Inverse through the per-ball certificates, checked at level 3.
  for (const auto& z : region_points(U, 3)) {
    PadicVector x = integer_vector(c3, z);
    PadicVector y = a.eval(x);
    PadicVector back = x;
    for (const auto& g : d.certificates)
      if (g.ball().contains(y)) back = invert_at(g, y, 3);
    CHECK(difference_valuation(back, x) >= 3);
  }

  // Unit-size displacement on one ball is rejected with a range witness.
  pieces[1].components[0] = Poly::constant(c3, 1, I(3));
  auto b = CompactlySupportedEndo::make(U, FunctionModel(c3, 1, 1, pieces));
  auto r = diffc_membership(b);
  CHECK_FALSE(r.accepted);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition == "range");
  CHECK(norm_max(b.sigma().eval(r.witness->x)) == r.witness->valuation);
  CHECK(r.witness->valuation < r.witness->required);
}
