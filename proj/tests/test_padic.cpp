// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ucalc/padic.hpp"

using namespace ucalc;

namespace {

// Reference: strip p from a nonzero integer, returning (valuation, unit).
std::pair<long, mpz_class> split(mpz_class n, int p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return {v, n};
}

mpz_class pw(int p, long e) {
  mpz_class r = 1;
  for (long i = 0; i < e; ++i) r *= p;
  return r;
}

Padic random_value(const PadicContext& ctx, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> vdist(-4, 6);
  std::uniform_int_distribution<int> rdist(1, ctx.precision());
  const int r = rdist(rng);
  mpz_class u;
  do {
    u = mpz_class(static_cast<unsigned long>(rng() % 1000000007ul));
    u %= pw(ctx.prime(), r);
  } while (u % ctx.prime() == 0);
  return Padic::approximate(ctx, vdist(rng), u, r);
}

}  // namespace

TEST_CASE("context validates its prime") {
  CHECK_THROWS_AS(PadicContext(4, 5), Error);
  CHECK_THROWS_AS(PadicContext(3, 0), Error);
  CHECK_NOTHROW(PadicContext(2, 1));
}

TEST_CASE("small sums carry into the valuation") {
  PadicContext c3(3, 12);
  Padic s = Padic::from_integer(c3, 1) + Padic::from_integer(c3, 2);
  CHECK(s.valuation() == 1);
  CHECK(s.unit() == 1);
  Padic a = Padic::from_integer(c3, 17);
  CHECK(a + Padic() == a);
  CHECK(a + Padic(c3) == a);
}

TEST_CASE("sum with carries matches integer arithmetic") {
  PadicContext c2(2, 6);
  Padic s = Padic::from_integer(c2, 11) + Padic::from_integer(c2, 21);
  mpz_class ref = (mpz_class(11) + 21) % pw(2, 6 + 5);
  auto [v, u] = split(ref, 2);
  CHECK(s.valuation() == v);
  CHECK(s.valuation() == 5);
  CHECK(s.unit() == u);
}

TEST_CASE("products follow valuations and unit arithmetic") {
  PadicContext c3(3, 12);
  Padic a = Padic::from_rational(c3, 1, 3);
  Padic b = Padic::from_integer(c3, 9);
  Padic ab = a * b;
  CHECK(ab.valuation() == 1);
  CHECK(ab.unit() == 1);

  PadicContext c5(5, 4);
  Padic m = Padic::from_integer(c5, 7) * Padic::from_integer(c5, 13);
  CHECK(m.valuation() == 0);
  CHECK(m.unit() == mpz_class(7 * 13) % pw(5, 4));
  CHECK(m * Padic::from_integer(c5, 1) == m);
}

TEST_CASE("inverses") {
  PadicContext c3(3, 12);
  Padic i3 = Padic::from_integer(c3, 3).inverse();
  CHECK(i3.valuation() == -1);
  CHECK(i3.unit() == 1);
  CHECK(Padic::from_integer(c3, 1).inverse() == Padic::from_integer(c3, 1));
  CHECK_THROWS_AS(Padic().inverse(), Error);

  PadicContext c5(5, 4);
  Padic i2 = Padic::from_integer(c5, 2).inverse();
  mpz_class ref;
  mpz_class two = 2, mod = pw(5, 4);
  mpz_invert(ref.get_mpz_t(), two.get_mpz_t(), mod.get_mpz_t());
  CHECK(i2.unit() == ref);
  REQUIRE(i2.digits().size() == 4);
  CHECK(i2.digits()[0] == 3);
  CHECK(equal_at_precision(i2 * Padic::from_integer(c5, 2), Padic::from_integer(c5, 1)));
}

TEST_CASE("exact values keep full size and expose N digits") {
  PadicContext c2(2, 4);
  Padic big = Padic::from_integer(c2, 37);  // 100101b
  CHECK(big.is_exact());
  CHECK(big.numerator() == 37);
  CHECK(big.unit() == 37 % 16);
  CHECK(big.digits() == std::vector<int>{1, 0, 1, 0});
  Padic small = Padic::from_integer(c2, -5);
  CHECK(small.is_exact());
  CHECK(small.digits() == std::vector<int>{1, 1, 0, 1});  // -5 = 11 mod 16
  CHECK((big - big).is_zero());
}

TEST_CASE("oversized exact values round to N digits") {
  PadicContext c3(3, 6);
  mpz_class huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 5, 5000);
  Padic h = Padic::from_integer(c3, huge);
  CHECK_FALSE(h.is_exact());
  CHECK(h.relative_precision() == 6);
  mpz_class m = 729;
  CHECK(h.unit() == mpz_class(huge % m));
}

TEST_CASE("full cancellation of approximate values is an error") {
  PadicContext c3(3, 5);
  Padic a = Padic::approximate(c3, 0, 121, 5);
  CHECK_THROWS_AS(a - a, Error);
  try {
    (void)(a - a);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PrecisionLoss);
  }
  Padic x = Padic::from_integer(c3, 7);
  CHECK((x - x).is_zero());
}

TEST_CASE("partial cancellation keeps certified digits only") {
  PadicContext c5(5, 6);
  // 1 + 5^3 and 1 at precision 6: difference 5^3 known to absolute precision 6.
  Padic a = Padic::approximate(c5, 0, 1 + 125, 6);
  Padic b = Padic::approximate(c5, 0, 1, 6);
  Padic d = a - b;
  CHECK(d.valuation() == 3);
  CHECK(d.relative_precision() == 3);
  CHECK(d.absolute_precision() == 6);
  CHECK(difference_valuation(a, b) == 3);
}

TEST_CASE("approximate addition agrees with a residue oracle") {
  std::mt19937_64 rng(7);
  for (int p : {2, 3, 5}) {
    PadicContext ctx(p, 8);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      Padic a = random_value(ctx, rng);
      Padic b = random_value(ctx, rng);
      const long A = std::min(a.absolute_precision(), b.absolute_precision());
      const long m = std::min(a.valuation(), b.valuation());
      mpz_class mod = pw(p, A - m);
      mpz_class ref = a.unit() * pw(p, a.valuation() - m) + b.unit() * pw(p, b.valuation() - m);
      ref %= mod;
      if (ref < 0) ref += mod;
      if (ref == 0) {
        CHECK_THROWS_AS(a + b, Error);
        continue;
      }
      Padic s = a + b;
      auto [dv, du] = split(ref, p);
      CHECK(s.valuation() == m + dv);
      CHECK(s.absolute_precision() == A);
      CHECK(s.unit() == du % pw(p, A - m - dv));
      ++checked;
    }
    CHECK(checked > 1900);
  }
}

TEST_CASE("ultrametric and multiplicative laws on random pairs") {
  std::mt19937_64 rng(42);
  for (int p : {2, 3, 5}) {
    PadicContext ctx(p, 12);
    for (int trial = 0; trial < 3000; ++trial) {
      Padic a = random_value(ctx, rng);
      Padic b = random_value(ctx, rng);
      Padic s;
      try {
        s = a + b;
      } catch (const Error&) {
        continue;
      }
      CHECK(s.valuation() >= std::min(a.valuation(), b.valuation()));
      if (a.valuation() != b.valuation()) CHECK(s.valuation() == std::min(a.valuation(), b.valuation()));
      CHECK((a * b).valuation() == a.valuation() + b.valuation());
      Padic one = a * a.inverse();
      CHECK(one.valuation() == 0);
      CHECK(one.unit() == 1);
    }
  }
}

TEST_CASE("maximum norm") {
  PadicContext c3(3, 12);
  PadicVector x{Padic::from_integer(c3, 1), Padic::from_integer(c3, 3)};
  CHECK(norm_max(x) == 0);
  CHECK(norm_max(zero_vector(c3, 3)) == kInfiniteValuation);
  PadicVector y{Padic::from_integer(c3, 9), Padic::from_rational(c3, 1, 3)};
  CHECK(norm_max(y) == -1);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    PadicVector u{random_value(c3, rng), random_value(c3, rng)};
    PadicVector w{random_value(c3, rng), random_value(c3, rng)};
    Padic t = random_value(c3, rng);
    CHECK(norm_max(t * u) == t.valuation() + norm_max(u));
    PadicVector sum;
    try {
      sum = u + w;
    } catch (const Error&) {
      continue;
    }
    CHECK(norm_max(sum) >= std::min(norm_max(u), norm_max(w)));
  }
}

TEST_CASE("rationals with p in the denominator stay exact") {
  PadicContext c3(3, 12);
  Padic q = Padic::from_rational(c3, 5, 27);
  CHECK(q.is_exact());
  CHECK(q.valuation() == -3);
  CHECK(q.unit() == 5);
  Padic r = Padic::from_rational(c3, 1, 4);
  CHECK(r.is_exact());
  CHECK(r.denominator() == 4);
  CHECK(r * Padic::from_integer(c3, 4) == Padic::from_integer(c3, 1));
  CHECK((r.unit() * 4) % 531441 == 1);
}

TEST_CASE("residues") {
  PadicContext c3(3, 12);
  CHECK(Padic::from_integer(c3, 22).residue(2) == 4);
  CHECK(Padic::from_integer(c3, -1).residue(2) == 8);
  CHECK_THROWS_AS(Padic::approximate(c3, 0, 1, 2).residue(3), Error);
}
