// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/padic.hpp"

#include <algorithm>
#include <sstream>

namespace ucalc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::CoverIncomplete: return "CoverIncomplete";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::CompositionUncertified: return "CompositionUncertified";
    case ErrorKind::CertificateInvalid: return "CertificateInvalid";
    case ErrorKind::MembershipFailure: return "MembershipFailure";
    case ErrorKind::NotProductPartition: return "NotProductPartition";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::SMatrixSingular: return "SMatrixSingular";
    case ErrorKind::NotCertified: return "NotCertified";
    case ErrorKind::IterationBudgetExceeded: return "IterationBudgetExceeded";
    case ErrorKind::MalformedIndex: return "MalformedIndex";
    case ErrorKind::NotBijective: return "NotBijective";
    case ErrorKind::ZeroConditionViolated: return "ZeroConditionViolated";
    case ErrorKind::RefinementMismatch: return "RefinementMismatch";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

PadicContext::PadicContext(int p, int precision) : p_(p), n_(precision) {
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  if (precision < 1) fail(ErrorKind::InvalidArgument, "precision must be >= 1");
}

mpz_class PadicContext::power(Valuation e) const {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(e));
  return r;
}

namespace {

// Removes the p-part of n (n != 0); returns the removed exponent.
Valuation strip(mpz_class& n, int p) {
  mpz_class pp(p);
  return static_cast<Valuation>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

mpz_class mod_positive(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// num / den modulo m for den invertible mod m.
mpz_class ratio_mod(const mpz_class& num, const mpz_class& den, const mpz_class& m) {
  if (den == 1) return mod_positive(num, m);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  return mod_positive(num * inv, m);
}

const PadicContext& pick_context(const Padic& a, const Padic& b) {
  const auto& ca = a.context();
  const auto& cb = b.context();
  if (!ca.is_set()) return cb;
  if (cb.is_set() && !(ca == cb)) fail(ErrorKind::ContextMismatch, "operands live in different contexts");
  return ca;
}

// The value p^m * s known modulo p^A (A > m finite). Throws when every known
// digit cancelled.
Padic from_residue(const PadicContext& ctx, Valuation m, mpz_class s, Valuation A) {
  s = mod_positive(s, ctx.power(A - m));
  if (s == 0) fail(ErrorKind::PrecisionLoss, "all known digits cancelled (result is O(p^" + std::to_string(A) + "))");
  Valuation v = m + strip(s, ctx.prime());
  Valuation r = std::min<Valuation>(ctx.precision(), A - v);
  return Padic::approximate(ctx, v, s, static_cast<int>(r));
}

// p^-m * x modulo p^(A-m); terms at or beyond A vanish.
mpz_class aligned_term(const Padic& x, Valuation m, Valuation A, const PadicContext& ctx) {
  if (x.is_zero() || x.valuation() >= A) return 0;
  return x.unit_mod(A - x.valuation()) * ctx.power(x.valuation() - m);
}

}  // namespace

Padic Padic::make_exact(const PadicContext& ctx, Valuation v, mpz_class num, mpz_class den) {
  if (num == 0) return Padic(ctx);
  if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
  v += strip(num, ctx.prime());
  v -= strip(den, ctx.prime());
  if (den < 0) {
    den = -den;
    num = -num;
  }
  if (den != 1) {
    mpz_class g = gcd(num, den);
    if (g != 1) {
      num /= g;
      den /= g;
    }
  }
  if (mpz_sizeinbase(num.get_mpz_t(), 2) > kExactBits || mpz_sizeinbase(den.get_mpz_t(), 2) > kExactBits)
    return approximate(ctx, v, ratio_mod(num, den, ctx.power(ctx.precision())), ctx.precision());
  Padic out(ctx);
  out.zero_ = false;
  out.v_ = v;
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  out.r_ = kExact;
  return out;
}

Padic Padic::exact(const PadicContext& ctx, Valuation v, const mpz_class& unit) { return make_exact(ctx, v, unit, 1); }

Padic Padic::approximate(const PadicContext& ctx, Valuation v, const mpz_class& unit, int relative_precision) {
  if (relative_precision < 1 || relative_precision > ctx.precision())
    fail(ErrorKind::InvalidArgument, "relative precision out of range");
  mpz_class u = unit;
  if (u == 0) fail(ErrorKind::PrecisionLoss, "approximate value with zero unit part");
  v += strip(u, ctx.prime());
  u = mod_positive(u, ctx.power(relative_precision));
  if (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(ctx.prime())))
    fail(ErrorKind::PrecisionLoss, "unit part vanished modulo p");
  Padic out(ctx);
  out.zero_ = false;
  out.v_ = v;
  out.num_ = std::move(u);
  out.den_ = 1;
  out.r_ = relative_precision;
  return out;
}

Padic Padic::from_integer(const PadicContext& ctx, const mpz_class& n) { return exact(ctx, 0, n); }

Padic Padic::from_rational(const PadicContext& ctx, const mpz_class& num, const mpz_class& den) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
  return make_exact(ctx, 0, num, den);
}

Valuation Padic::absolute_precision() const noexcept {
  if (is_exact()) return kInfiniteValuation;
  return v_ + r_;
}

mpz_class Padic::unit() const {
  if (zero_) return 0;
  if (r_ != kExact) return num_;
  return ratio_mod(num_, den_, ctx_.power(ctx_.precision()));
}

mpz_class Padic::unit_mod(Valuation k) const {
  if (zero_) return 0;
  if (r_ != kExact && k > r_) fail(ErrorKind::PrecisionLoss, "unit known to fewer digits than requested");
  return ratio_mod(num_, den_, ctx_.power(k));
}

std::vector<int> Padic::digits() const {
  std::vector<int> out;
  if (zero_) return out;
  mpz_class u = unit();
  const int count = r_ == kExact ? ctx_.precision() : r_;
  const unsigned long p = static_cast<unsigned long>(ctx_.prime());
  for (int i = 0; i < count; ++i) out.push_back(static_cast<int>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p)));
  return out;
}

mpz_class Padic::residue(Valuation k) const {
  if (k <= 0 || zero_) return 0;
  if (v_ < 0) fail(ErrorKind::InvalidArgument, "residue of a non-integral value");
  if (v_ >= k) return 0;
  if (!is_exact() && absolute_precision() < k)
    fail(ErrorKind::PrecisionLoss, "value known only modulo p^" + std::to_string(absolute_precision()) +
                                       ", residue mod p^" + std::to_string(k) + " requested");
  return mod_positive(unit_mod(k - v_) * ctx_.power(v_), ctx_.power(k));
}

Padic Padic::operator-() const {
  if (zero_) return *this;
  Padic out = *this;
  if (r_ == kExact)
    out.num_ = -num_;
  else
    out.num_ = ctx_.power(r_) - num_;
  return out;
}

Padic Padic::inverse() const {
  if (zero_) fail(ErrorKind::DivisionByZero, "inverse of exact zero");
  if (r_ == kExact) return make_exact(ctx_, -v_, den_, num_);
  mpz_class m = ctx_.power(r_);
  mpz_class w;
  mpz_invert(w.get_mpz_t(), num_.get_mpz_t(), m.get_mpz_t());
  return approximate(ctx_, -v_, w, r_);
}

Padic Padic::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (!ctx_.is_set()) {
    if (e == 0) fail(ErrorKind::InvalidArgument, "0^0 without a context");
    return Padic();
  }
  Padic result = exact(ctx_, 0, 1);
  Padic base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Padic operator+(const Padic& a, const Padic& b) {
  if (a.zero_) return b;
  if (b.zero_) return a;
  const PadicContext& ctx = pick_context(a, b);
  const Valuation m = std::min(a.v_, b.v_);
  if (a.is_exact() && b.is_exact()) {
    mpz_class num = a.num_ * ctx.power(a.v_ - m) * b.den_ + b.num_ * ctx.power(b.v_ - m) * a.den_;
    return Padic::make_exact(ctx, m, std::move(num), a.den_ * b.den_);
  }
  const Valuation A = std::min(a.absolute_precision(), b.absolute_precision());
  mpz_class s = aligned_term(a, m, A, ctx) + aligned_term(b, m, A, ctx);
  return from_residue(ctx, m, s, A);
}

Padic operator*(const Padic& a, const Padic& b) {
  if (a.zero_ || b.zero_) return Padic(pick_context(a, b));
  const PadicContext& ctx = pick_context(a, b);
  if (a.is_exact() && b.is_exact()) return Padic::make_exact(ctx, a.v_ + b.v_, a.num_ * b.num_, a.den_ * b.den_);
  const int r = std::min(a.r_, b.r_);
  return Padic::approximate(ctx, a.v_ + b.v_, a.unit_mod(r) * b.unit_mod(r), r);
}

bool operator==(const Padic& a, const Padic& b) {
  if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
  return a.ctx_ == b.ctx_ && a.v_ == b.v_ && a.r_ == b.r_ && a.num_ == b.num_ && a.den_ == b.den_;
}

Valuation difference_valuation(const Padic& a, const Padic& b) {
  if (a.is_exact() && b.is_exact()) return (a - b).valuation();
  const PadicContext& ctx = pick_context(a, b);
  const Valuation A = std::min(a.absolute_precision(), b.absolute_precision());
  const Valuation m = std::min(a.valuation(), b.valuation());
  if (m >= A) return A;
  mpz_class s = mod_positive(aligned_term(a, m, A, ctx) - aligned_term(b, m, A, ctx), ctx.power(A - m));
  if (s == 0) return A;
  return std::min(A, m + strip(s, ctx.prime()));
}

bool equal_at_precision(const Padic& a, const Padic& b) {
  const Valuation A = std::min(a.absolute_precision(), b.absolute_precision());
  return difference_valuation(a, b) >= A;
}

std::string Padic::to_string() const {
  if (zero_) return "0";
  std::ostringstream os;
  os << ctx_.prime() << "^" << v_ << "*" << num_.get_str();
  if (r_ == kExact) {
    if (den_ != 1) os << "/" << den_.get_str();
  } else {
    os << " + O(" << ctx_.prime() << "^" << absolute_precision() << ")";
  }
  return os.str();
}

PadicVector operator+(std::span<const Padic> a, std::span<const Padic> b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "vector dimension mismatch");
  PadicVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

PadicVector operator-(std::span<const Padic> a, std::span<const Padic> b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "vector dimension mismatch");
  PadicVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

PadicVector operator*(const Padic& t, std::span<const Padic> x) {
  PadicVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t * x[i];
  return out;
}

Valuation norm_max(std::span<const Padic> x) {
  Valuation m = kInfiniteValuation;
  for (const auto& c : x) m = std::min(m, c.valuation());
  return m;
}

Valuation difference_valuation(std::span<const Padic> a, std::span<const Padic> b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "vector dimension mismatch");
  Valuation m = kInfiniteValuation;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, difference_valuation(a[i], b[i]));
  return m;
}

bool equal_at_precision(std::span<const Padic> a, std::span<const Padic> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal_at_precision(a[i], b[i])) return false;
  return true;
}

Valuation absolute_precision(std::span<const Padic> x) {
  Valuation m = kInfiniteValuation;
  for (const auto& c : x) m = std::min(m, c.absolute_precision());
  return m;
}

PadicVector zero_vector(const PadicContext& ctx, std::size_t d) { return PadicVector(d, Padic(ctx)); }

PadicVector integer_vector(const PadicContext& ctx, std::span<const std::int64_t> coords) {
  PadicVector out;
  out.reserve(coords.size());
  for (auto c : coords) out.push_back(Padic::from_integer(ctx, static_cast<long>(c)));
  return out;
}

std::string to_string(std::span<const Padic> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += x[i].to_string();
  }
  return s + ")";
}

}  // namespace ucalc
