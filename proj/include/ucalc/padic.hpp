// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ucalc/error.hpp"

namespace ucalc {

using Valuation = std::int64_t;
inline constexpr Valuation kInfiniteValuation = std::numeric_limits<Valuation>::max();

bool is_prime(int p);

// Prime p and relative precision N. A plain value; nothing global.
class PadicContext {
 public:
  PadicContext() = default;
  PadicContext(int p, int precision);

  int prime() const noexcept { return p_; }
  int precision() const noexcept { return n_; }
  bool is_set() const noexcept { return p_ != 0; }

  // p^e for e >= 0.
  mpz_class power(Valuation e) const;

  friend bool operator==(const PadicContext&, const PadicContext&) = default;

 private:
  int p_ = 0;
  int n_ = 0;
};

// A p-adic number p^v * u at relative precision N.
//
// Three states:
//  - exact zero (the default-constructed value; needs no context);
//  - exact nonzero: u = a/b with a, b integers prime to p, b > 0;
//  - approximate: u in [1, p^r) prime to p, known modulo p^r, 1 <= r <= N.
// Exact values stay exact under + - * / until their numerator or
// denominator outgrows kExactBits; they are then rounded to N digits.
// Approximate arithmetic tracks the absolute precision v + r, so every
// digit reported is a certified digit.
class Padic {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max();
  static constexpr std::size_t kExactBits = 8192;

  Padic() = default;
  explicit Padic(const PadicContext& ctx) : ctx_(ctx) {}

  static Padic from_integer(const PadicContext& ctx, const mpz_class& n);
  static Padic from_integer(const PadicContext& ctx, long n) { return from_integer(ctx, mpz_class(n)); }
  static Padic from_rational(const PadicContext& ctx, const mpz_class& num, const mpz_class& den);
  // p^v * unit for an integer unit (p-factors of unit are moved into v).
  static Padic exact(const PadicContext& ctx, Valuation v, const mpz_class& unit);
  static Padic approximate(const PadicContext& ctx, Valuation v, const mpz_class& unit, int relative_precision);
  static Padic power_of_p(const PadicContext& ctx, Valuation e) { return exact(ctx, e, 1); }

  const PadicContext& context() const noexcept { return ctx_; }
  bool is_zero() const noexcept { return zero_; }
  bool is_exact() const noexcept { return zero_ || r_ == kExact; }

  // kInfiniteValuation for zero.
  Valuation valuation() const noexcept { return zero_ ? kInfiniteValuation : v_; }
  // Unit part reduced into [0, p^r), r = relative_precision() capped at N.
  mpz_class unit() const;
  // Exact values: unit part as numerator / denominator (denominator > 0).
  const mpz_class& numerator() const noexcept { return num_; }
  const mpz_class& denominator() const noexcept { return den_; }
  int relative_precision() const noexcept { return zero_ ? kExact : r_; }
  // v + r, or kInfiniteValuation for exact values.
  Valuation absolute_precision() const noexcept;

  // Base-p digits of unit(), least significant first: r digits for
  // approximate values, N digits for exact ones.
  std::vector<int> digits() const;

  // x mod p^k as an integer in [0, p^k). Requires x integral and known to
  // absolute precision >= k (PrecisionLoss otherwise).
  mpz_class residue(Valuation k) const;
  // Unit part modulo p^k (k <= r for approximate values).
  mpz_class unit_mod(Valuation k) const;

  Padic operator-() const;
  Padic inverse() const;
  Padic pow(long e) const;

  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }

  friend Padic operator+(const Padic& a, const Padic& b);
  friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }
  friend Padic operator*(const Padic& a, const Padic& b);
  friend Padic operator/(const Padic& a, const Padic& b) { return a * b.inverse(); }

  // Identical representation (bit-exact). Use equal_at_precision for
  // mathematical identities.
  friend bool operator==(const Padic& a, const Padic& b);

  std::string to_string() const;

 private:
  static Padic make_exact(const PadicContext& ctx, Valuation v, mpz_class num, mpz_class den);

  PadicContext ctx_;
  bool zero_ = true;
  Valuation v_ = 0;
  // Exact: num_/den_. Approximate: num_ holds u, den_ is 1.
  mpz_class num_;
  mpz_class den_ = 1;
  int r_ = 0;
};

inline Padic add(const Padic& a, const Padic& b) { return a + b; }
inline Padic mul(const Padic& a, const Padic& b) { return a * b; }
inline Padic inv(const Padic& a) { return a.inverse(); }

// min(v(a - b), common absolute precision); never throws on cancellation.
Valuation difference_valuation(const Padic& a, const Padic& b);
// a and b agree modulo p^(min absolute precision); exact equality for exact values.
bool equal_at_precision(const Padic& a, const Padic& b);

using PadicVector = std::vector<Padic>;

PadicVector operator+(std::span<const Padic> a, std::span<const Padic> b);
PadicVector operator-(std::span<const Padic> a, std::span<const Padic> b);
PadicVector operator*(const Padic& t, std::span<const Padic> x);
inline PadicVector operator+(const PadicVector& a, const PadicVector& b) {
  return std::span<const Padic>(a) + std::span<const Padic>(b);
}
inline PadicVector operator-(const PadicVector& a, const PadicVector& b) {
  return std::span<const Padic>(a) - std::span<const Padic>(b);
}
inline PadicVector operator*(const Padic& t, const PadicVector& x) { return t * std::span<const Padic>(x); }

// Valuation m with ||x||_inf = p^(-m); kInfiniteValuation for the zero vector.
Valuation norm_max(std::span<const Padic> x);
Valuation difference_valuation(std::span<const Padic> a, std::span<const Padic> b);
bool equal_at_precision(std::span<const Padic> a, std::span<const Padic> b);
// Smallest absolute precision among coordinates.
Valuation absolute_precision(std::span<const Padic> x);

PadicVector zero_vector(const PadicContext& ctx, std::size_t d);
PadicVector integer_vector(const PadicContext& ctx, std::span<const std::int64_t> coords);

std::string to_string(std::span<const Padic> x);

}  // namespace ucalc
