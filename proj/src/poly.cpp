// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/poly.hpp"

#include <algorithm>
#include <numeric>

namespace ucalc {

Poly Poly::constant(const PadicContext& ctx, int nvars, const Padic& c) {
  Poly out(ctx, nvars);
  out.add_term(Exponents(nvars, 0), c);
  return out;
}

Poly Poly::variable(const PadicContext& ctx, int nvars, int index) {
  Exponents e(nvars, 0);
  e.at(index) = 1;
  return monomial(ctx, e, Padic::from_integer(ctx, 1));
}

Poly Poly::monomial(const PadicContext& ctx, const Exponents& exps, const Padic& c) {
  Poly out(ctx, static_cast<int>(exps.size()));
  out.add_term(exps, c);
  return out;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Padic Poly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Padic(ctx_) : it->second;
}

Valuation Poly::min_coefficient_valuation() const {
  Valuation m = kInfiniteValuation;
  for (const auto& [e, c] : terms_) m = std::min(m, c.valuation());
  return m;
}

void Poly::add_term(const Exponents& exps, const Padic& c) {
  if (static_cast<int>(exps.size()) != nvars_) fail(ErrorKind::InvalidArgument, "exponent arity mismatch");
  if (c.is_zero()) return;
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    terms_.emplace(exps, c);
    return;
  }
  Padic s = it->second + c;
  if (s.is_zero())
    terms_.erase(it);
  else
    it->second = s;
}

Poly Poly::operator-() const {
  Poly out(ctx_, nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  if (!ctx_.is_set()) ctx_ = o.ctx_;
  if (terms_.empty() && nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (!ctx_.is_set()) ctx_ = o.ctx_;
  if (terms_.empty() && nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) fail(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  Poly out(a.ctx_.is_set() ? a.ctx_ : b.ctx_, a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly operator*(const Padic& c, const Poly& a) {
  Poly out(a.ctx_, a.nvars_);
  if (c.is_zero()) return out;
  for (const auto& [e, k] : a.terms_) out.terms_.emplace(e, c * k);
  return out;
}

Poly Poly::partial(int index) const {
  Poly out(ctx_, nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(index) == 0) continue;
    Exponents f = e;
    f[index] -= 1;
    out.add_term(f, Padic::from_integer(ctx_, e[index]) * c);
  }
  return out;
}

Poly Poly::embed(int nvars, std::span<const int> map) const {
  Poly out(ctx_, nvars);
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars, 0);
    for (int i = 0; i < nvars_; ++i) f.at(map[i]) += e[i];
    out.add_term(f, c);
  }
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")";
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) s += "*x" + std::to_string(i) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return s;
}

Padic evaluate(const Poly& P, std::span<const Padic> x) { return evaluate<Padic>(P, x, Padic(P.context())); }

Poly substitute(const Poly& P, std::span<const Poly> values) {
  if (values.empty()) {
    if (P.nvars() != 0) fail(ErrorKind::InvalidArgument, "polynomial arity mismatch");
    return P;
  }
  return evaluate<Poly>(P, values, values.front());
}

Poly shift(const Poly& P, std::span<const Padic> center, const Padic& scale) {
  const int n = P.nvars();
  std::vector<Poly> args;
  args.reserve(n);
  for (int i = 0; i < n; ++i)
    args.push_back(Poly::constant(P.context(), n, center[i]) + scale * Poly::variable(P.context(), n, i));
  if (n == 0) return P;
  return substitute(P, args);
}

Poly difference_quotient(const Poly& P) {
  const int n = P.nvars();
  const PadicContext& ctx = P.context();
  Poly out(ctx, 2 * n + 1);
  for (const auto& [alpha, c] : P.terms()) {
    // Expand prod_i (z_i + tau w_i)^{alpha_i}, skipping the all-zero beta term.
    Exponents beta(n, 0);
    while (true) {
      int i = 0;
      while (i < n && beta[i] == alpha[i]) beta[i++] = 0;
      if (i == n) break;
      ++beta[i];
      mpz_class binom = 1;
      int total = 0;
      Exponents e(2 * n + 1, 0);
      for (int k = 0; k < n; ++k) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(alpha[k]), static_cast<unsigned long>(beta[k]));
        binom *= b;
        e[k] = alpha[k] - beta[k];
        e[n + k] = beta[k];
        total += beta[k];
      }
      e[2 * n] = total - 1;
      out.add_term(e, Padic::from_integer(ctx, binom) * c);
    }
  }
  return out;
}

}  // namespace ucalc
