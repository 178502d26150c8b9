// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <vector>

#include "ucalc/padic.hpp"

namespace ucalc {

using Exponents = std::vector<int>;

// Sparse multivariate polynomial with p-adic coefficients. Exact zero
// coefficients are never stored.
class Poly {
 public:
  using Terms = std::map<Exponents, Padic>;

  Poly() = default;
  Poly(const PadicContext& ctx, int nvars) : ctx_(ctx), nvars_(nvars) {}

  static Poly constant(const PadicContext& ctx, int nvars, const Padic& c);
  static Poly variable(const PadicContext& ctx, int nvars, int index);
  static Poly monomial(const PadicContext& ctx, const Exponents& exps, const Padic& c);

  const PadicContext& context() const noexcept { return ctx_; }
  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const;
  Padic coefficient(const Exponents& exps) const;
  // Minimum coefficient valuation (kInfiniteValuation for the zero polynomial).
  Valuation min_coefficient_valuation() const;

  void add_term(const Exponents& exps, const Padic& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Padic& c, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) = default;

  Poly partial(int index) const;
  // Same polynomial in a larger variable set: variable i goes to slot map[i].
  Poly embed(int nvars, std::span<const int> map) const;

  std::string to_string() const;

 private:
  PadicContext ctx_;
  int nvars_ = 0;
  Terms terms_;
};

inline Poly operator+(const Poly& a, const Padic& c) { return a + Poly::constant(a.context(), a.nvars(), c); }
inline Poly operator-(const Poly& a, const Padic& c) { return a - Poly::constant(a.context(), a.nvars(), c); }

// Constant of the same ring as `like`.
inline Padic lift(const Padic&, const Padic& c) { return c; }
inline Poly lift(const Poly& like, const Padic& c) { return Poly::constant(like.context(), like.nvars(), c); }

// Evaluates P at args over any commutative ring R with R*R, R+R and a lift()
// overload. `like` fixes the ring instance for constants.
template <class R>
R evaluate(const Poly& P, std::span<const R> args, const R& like) {
  if (static_cast<int>(args.size()) != P.nvars())
    fail(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  std::vector<std::vector<R>> powers(args.size());
  auto power = [&](std::size_t i, int e) -> const R& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(args[i]);
    while (static_cast<int>(cache.size()) < e) cache.push_back(cache.back() * args[i]);
    return cache[e - 1];
  };
  R acc = lift(like, Padic());
  bool first = true;
  for (const auto& [exps, c] : P.terms()) {
    R term = lift(like, c);
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > 0) term = term * power(i, exps[i]);
    if (first) {
      acc = term;
      first = false;
    } else {
      acc = acc + term;
    }
  }
  return acc;
}

Padic evaluate(const Poly& P, std::span<const Padic> x);
// P(Q_1, ..., Q_n).
Poly substitute(const Poly& P, std::span<const Poly> values);
// P(c + scale * z) as a polynomial in z.
Poly shift(const Poly& P, std::span<const Padic> center, const Padic& scale);

// (P(z + tau*w) - P(z)) / tau as a polynomial in (z, w, tau), 2n+1 variables.
// Built from exact binomial expansions, so no coefficient cancels.
Poly difference_quotient(const Poly& P);

}  // namespace ucalc
