// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/jet.hpp"

#include <numeric>

namespace ucalc {

int Jet::total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

void Jet::add_term(const Exponents& e, const Padic& c) {
  if (c.is_zero() || total(e) > order_) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  Padic s = it->second + c;
  if (s.is_zero())
    terms_.erase(it);
  else
    it->second = s;
}

Jet Jet::constant(const PadicContext& ctx, int nvars, int order, const Padic& c) {
  Jet out(ctx, nvars, order);
  out.add_term(Exponents(nvars, 0), c);
  return out;
}

Jet Jet::variable(const PadicContext& ctx, int nvars, int order, int index) {
  Jet out(ctx, nvars, order);
  Exponents e(nvars, 0);
  e.at(index) = 1;
  out.add_term(e, Padic::from_integer(ctx, 1));
  return out;
}

Padic Jet::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Padic(ctx_) : it->second;
}

Jet Jet::extend() const {
  Jet out(ctx_, nvars_ + 1, order_ + 1);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f.push_back(0);
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

Jet Jet::last_coefficient(int n) const {
  if (nvars_ == 0) fail(ErrorKind::InvalidArgument, "jet has no variables");
  Jet out(ctx_, nvars_ - 1, order_ - 1);
  for (const auto& [e, c] : terms_) {
    if (e.back() != n) continue;
    out.add_term(Exponents(e.begin(), e.end() - 1), c);
  }
  return out;
}

Jet Jet::operator-() const {
  Jet out(ctx_, nvars_, order_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Jet operator+(const Jet& a, const Jet& b) {
  if (a.nvars_ != b.nvars_ || a.order_ != b.order_) fail(ErrorKind::InvalidArgument, "jet shape mismatch");
  Jet out = a;
  if (!out.ctx_.is_set()) out.ctx_ = b.ctx_;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.nvars_ != b.nvars_ || a.order_ != b.order_) fail(ErrorKind::InvalidArgument, "jet shape mismatch");
  Jet out(a.ctx_.is_set() ? a.ctx_ : b.ctx_, a.nvars_, a.order_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    const int da = Jet::total(ea);
    for (const auto& [eb, cb] : b.terms_) {
      if (da + Jet::total(eb) > a.order_) continue;
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Jet operator*(const Padic& c, const Jet& a) {
  Jet out(a.ctx_, a.nvars_, a.order_);
  if (c.is_zero()) return out;
  for (const auto& [e, k] : a.terms_) out.terms_.emplace(e, c * k);
  return out;
}

Jet Jet::inverse() const {
  const Padic c = constant_term();
  if (c.is_zero()) fail(ErrorKind::DivisionByZero, "jet with zero constant term");
  const Padic ci = c.inverse();
  // 1/(c + h) = c^-1 * sum_n (-h/c)^n; h is nilpotent of index order+1.
  Jet h = *this - constant(ctx_, nvars_, order_, c);
  Jet q = -(ci * h);
  Jet sum = constant(ctx_, nvars_, order_, Padic::from_integer(ctx_, 1));
  Jet power = sum;
  for (int n = 1; n <= order_; ++n) {
    power = power * q;
    sum = sum + power;
  }
  return ci * sum;
}

}  // namespace ucalc
