// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "ucalc/poly.hpp"

namespace ucalc {

// Truncated multivariate power series: terms of total degree <= order in
// nvars formal variables. Used to evaluate difference quotients at points
// where some of the t parameters vanish.
class Jet {
 public:
  Jet() = default;
  Jet(const PadicContext& ctx, int nvars, int order) : ctx_(ctx), nvars_(nvars), order_(order) {}

  static Jet constant(const PadicContext& ctx, int nvars, int order, const Padic& c);
  static Jet variable(const PadicContext& ctx, int nvars, int order, int index);

  const PadicContext& context() const noexcept { return ctx_; }
  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  const std::map<Exponents, Padic>& terms() const noexcept { return terms_; }
  Padic constant_term() const;

  // Same series in one more variable (appended last) and one more order.
  Jet extend() const;
  // Coefficient of s^n for the last variable s, as a jet in the others with
  // order reduced by one.
  Jet last_coefficient(int n) const;

  Jet inverse() const;

  Jet operator-() const;
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(const Padic& c, const Jet& a);

 private:
  void add_term(const Exponents& e, const Padic& c);
  static int total(const Exponents& e);

  PadicContext ctx_;
  int nvars_ = 0;
  int order_ = 0;
  std::map<Exponents, Padic> terms_;
};

inline Jet lift(const Jet& like, const Padic& c) {
  return Jet::constant(like.context(), like.nvars(), like.order(), c);
}

}  // namespace ucalc
