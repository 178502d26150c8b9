// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/calculus.hpp"

#include <algorithm>

namespace ucalc {

std::size_t flat_size(int d, int k) {
  std::size_t s = static_cast<std::size_t>(d);
  for (int i = 0; i < k; ++i) s = 2 * s + 1;
  return s;
}

namespace {

template <class T>
struct Split {
  std::vector<T> base;
  std::vector<T> dir;
  T t;
};

// One step of the recursion: the order-k point as (base, dir, t) of order k-1.
template <class T>
Split<T> split(std::span<const T> flat, int d, int k, Layout layout) {
  if (flat.size() != flat_size(d, k)) fail(ErrorKind::InvalidArgument, "flat point has the wrong size");
  Split<T> out;
  if (layout == Layout::Nested) {
    const std::size_t s = flat_size(d, k - 1);
    out.base.assign(flat.begin(), flat.begin() + s);
    out.dir.assign(flat.begin() + s, flat.begin() + 2 * s);
    out.t = flat[2 * s];
    return out;
  }
  const std::size_t half = std::size_t{1} << (k - 1);
  const std::size_t X = half * static_cast<std::size_t>(d);
  const std::size_t S = half - 1;
  auto at = [&](std::size_t off, std::size_t len) { return flat.subspan(off, len); };
  auto x = at(0, X), y = at(X, X), u = at(2 * X, S), v = at(2 * X + S, S);
  out.base.assign(x.begin(), x.end());
  out.base.insert(out.base.end(), u.begin(), u.end());
  out.dir.assign(y.begin(), y.end());
  out.dir.insert(out.dir.end(), v.begin(), v.end());
  out.t = flat[2 * X + 2 * S];
  return out;
}

std::vector<Jet> tower(const FunctionModel& f, std::span<const Jet> flat, int k, Layout layout) {
  if (k == 0) return f.eval(flat);
  auto sp = split<Jet>(flat, f.dim(), k, layout);
  const std::size_t n = sp.base.size();
  if (!sp.t.constant_term().is_zero()) {
    std::vector<Jet> moved(n);
    for (std::size_t i = 0; i < n; ++i) moved[i] = sp.base[i] + sp.t * sp.dir[i];
    auto a = tower(f, moved, k - 1, layout);
    auto b = tower(f, sp.base, k - 1, layout);
    const Jet ti = sp.t.inverse();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - b[i]) * ti;
    return a;
  }
  // t vanishes at the base point: expand F(base + s dir) in a fresh variable s
  // and divide formally.
  const int nv = sp.t.nvars();
  const int order = sp.t.order();
  const Jet s = Jet::variable(f.context(), nv + 1, order + 1, nv);
  std::vector<Jet> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[i] = sp.base[i].extend() + s * sp.dir[i].extend();
  auto G = tower(f, moved, k - 1, layout);
  std::vector<Jet> out;
  for (const auto& g : G) {
    Jet acc(f.context(), nv, order);
    Jet tp = Jet::constant(f.context(), nv, order, Padic::from_integer(f.context(), 1));
    for (int m = 1; m <= order + 1; ++m) {
      acc = acc + tp * g.last_coefficient(m);
      tp = tp * sp.t;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

bool in_domain(const Region& U, std::span<const Padic> flat, int k, Layout layout) {
  if (k == 0) return U.contains(flat);
  auto sp = split<Padic>(flat, U.dim(), k, layout);
  if (!in_domain(U, sp.base, k - 1, layout)) return false;
  PadicVector moved = sp.base + sp.t * sp.dir;
  return in_domain(U, moved, k - 1, layout);
}

PadicVector difference_quotient(const FunctionModel& f, std::span<const Padic> flat, int k, Layout layout) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "negative order");
  if (!in_domain(f.domain(), flat, k, layout)) fail(ErrorKind::OutOfDomain, "point is not in the domain of f^[k]");
  std::vector<Jet> jets;
  jets.reserve(flat.size());
  for (const auto& c : flat) jets.push_back(Jet::constant(f.context(), 0, 0, c));
  PadicVector out;
  for (const auto& j : tower(f, jets, k, layout)) out.push_back(j.constant_term());
  return out;
}

PadicVector dq1(const FunctionModel& f, const DQPoint& pt) {
  PadicVector flat = pt.x;
  flat.insert(flat.end(), pt.y.begin(), pt.y.end());
  flat.push_back(pt.t);
  return difference_quotient(f, flat, 1, Layout::Nested);
}

PadicVector dqk(const FunctionModel& f, std::span<const Padic> nested, int k) {
  return difference_quotient(f, nested, k, Layout::Nested);
}

PadicVector braced_eval(const FunctionModel& f, std::span<const Padic> braced, int k) {
  return difference_quotient(f, braced, k, Layout::Braced);
}

std::vector<std::size_t> braced_to_nested(int d, int k) {
  if (k == 0) {
    std::vector<std::size_t> id(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    return id;
  }
  const auto inner = braced_to_nested(d, k - 1);
  const std::size_t s = flat_size(d, k - 1);
  const std::size_t half = std::size_t{1} << (k - 1);
  const std::size_t X = half * static_cast<std::size_t>(d);
  const std::size_t S = half - 1;
  std::vector<std::size_t> perm(flat_size(d, k));
  // Braced (x, y, u, v, t) forwards base = (x, u) and dir = (y, v).
  for (std::size_t i = 0; i < X; ++i) {
    perm[i] = inner[i];
    perm[X + i] = s + inner[i];
  }
  for (std::size_t i = 0; i < S; ++i) {
    perm[2 * X + i] = inner[X + i];
    perm[2 * X + S + i] = s + inner[X + i];
  }
  perm[2 * X + 2 * S] = 2 * s;
  return perm;
}

PadicVector braced_point(std::span<const PadicVector> xs, std::span<const Padic> scalars) {
  if (scalars.size() + 1 != xs.size()) fail(ErrorKind::InvalidArgument, "braced point needs 2^k vectors and 2^k - 1 scalars");
  PadicVector out;
  for (const auto& x : xs) out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), scalars.begin(), scalars.end());
  return out;
}

PadicVector directional(const FunctionModel& f, std::span<const Padic> x, std::span<const PadicVector> dirs) {
  const auto& pc = f.pieces()[f.piece_index(x)];
  const int d = f.dim();
  PadicVector out;
  for (Poly q : pc.components) {
    for (const auto& v : dirs) {
      if (static_cast<int>(v.size()) != d) fail(ErrorKind::InvalidArgument, "direction has wrong dimension");
      Poly next(f.context(), d);
      for (int i = 0; i < d; ++i) next += v[i] * q.partial(i);
      q = std::move(next);
    }
    out.push_back(evaluate(q, x));
  }
  return out;
}

ScalingExponents scaling_exponents(int k) {
  ScalingExponents e;
  e.i = {0};
  for (int step = 0; step < k; ++step) {
    ScalingExponents n;
    for (int v : e.i) n.i.push_back(2 * v);
    for (int v : e.i) n.i.push_back(2 * v + 1);
    for (int v : e.j) n.j.push_back(2 * v + 1);
    for (int v : e.j) n.j.push_back(2 * v);
    n.j.push_back(0);
    n.ell = 2 * e.ell + 1;
    e = std::move(n);
  }
  return e;
}

Comparison compare(PadicVector lhs, PadicVector rhs) {
  Comparison c;
  c.equal = equal_at_precision(lhs, rhs);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

Comparison check_scaling(const FunctionModel& f, int k, std::span<const PadicVector> xs,
                         std::span<const Padic> scalars, const Padic& t) {
  const auto ex = scaling_exponents(k);
  if (xs.size() != ex.i.size() || scalars.size() != ex.j.size())
    fail(ErrorKind::InvalidArgument, "scaling check needs 2^k vectors and 2^k - 1 scalars");
  if (t.is_zero()) fail(ErrorKind::InvalidArgument, "scaling parameter must be nonzero");
  PadicVector ts;
  for (const auto& s : scalars) ts.push_back(t * s);
  std::vector<PadicVector> rx;
  for (std::size_t n = 0; n < xs.size(); ++n) rx.push_back(t.pow(ex.i[n]) * xs[n]);
  PadicVector rs;
  for (std::size_t n = 0; n < scalars.size(); ++n) rs.push_back(t.pow(-ex.j[n]) * scalars[n]);
  PadicVector left = braced_point(xs, ts);
  PadicVector right = braced_point(rx, rs);
  if (!in_domain(f.domain(), left, k, Layout::Braced))
    fail(ErrorKind::MembershipFailure, "left argument leaves U^{k}");
  if (!in_domain(f.domain(), right, k, Layout::Braced))
    fail(ErrorKind::MembershipFailure, "rescaled argument leaves U^{k}");
  PadicVector lhs = braced_eval(f, left, k);
  PadicVector rhs = t.pow(-ex.ell) * braced_eval(f, right, k);
  return compare(std::move(lhs), std::move(rhs));
}

BoundResult image_check(const Piece& piece, const Ball& target, int max_depth) {
  if (static_cast<int>(piece.components.size()) != target.dim())
    fail(ErrorKind::InvalidArgument, "image ball has the wrong dimension");
  const PadicContext& ctx = piece.components.empty() ? PadicContext() : piece.components.front().context();
  const Padic scale = Padic::power_of_p(ctx, piece.ball.level());
  const PadicVector c = piece.ball.center_vector(ctx);
  std::vector<Poly> Q;
  for (int i = 0; i < target.dim(); ++i) {
    Poly q = shift(piece.components[i], c, scale);
    q -= Poly::constant(ctx, q.nvars(), Padic::from_integer(ctx, target.center()[i]));
    Q.push_back(std::move(q));
  }
  return check_valuation_bound(Q, target.level(), max_depth);
}

namespace {

const Piece* find_piece(const FunctionModel& g, const Ball& b) {
  for (const auto& pc : g.pieces())
    if (pc.ball == b) return &pc;
  return nullptr;
}

Piece composed_piece(const Piece& outer, const Piece& inner) {
  Piece out{inner.ball, {}};
  for (const auto& q : outer.components) out.components.push_back(substitute(q, inner.components));
  return out;
}

}  // namespace

FunctionModel compose(const FunctionModel& g, const FunctionModel& f, const CompositionCertificate& cert,
                      int max_depth) {
  if (g.dim() != f.codim()) fail(ErrorKind::InvalidArgument, "composition dimension mismatch");
  std::vector<Piece> out;
  for (const auto& pc : f.pieces()) {
    auto it = cert.find(pc.ball);
    if (it == cert.end()) fail(ErrorKind::CertificateInvalid, "no certificate entry for " + pc.ball.to_string());
    const Piece* target = find_piece(g, it->second);
    if (!target) fail(ErrorKind::CertificateInvalid, it->second.to_string() + " is not a piece of the outer map");
    auto r = image_check(pc, it->second, max_depth);
    if (r.status != BoundStatus::Holds)
      fail(ErrorKind::CertificateInvalid,
           "image of " + pc.ball.to_string() + " not certified inside " + it->second.to_string());
    out.push_back(composed_piece(*target, pc));
  }
  return FunctionModel(f.context(), f.dim(), g.codim(), std::move(out));
}

CompositionCertificate find_certificate(const FunctionModel& g, const FunctionModel& f, FunctionModel& refined_f,
                                        int max_refine, int max_depth) {
  CompositionCertificate cert;
  std::vector<Piece> done;
  std::vector<std::pair<Piece, int>> work;
  for (const auto& pc : f.pieces()) work.emplace_back(pc, 0);
  const PadicContext& ctx = f.context();
  while (!work.empty()) {
    auto [pc, depth] = std::move(work.back());
    work.pop_back();
    PadicVector c = pc.ball.center_vector(ctx);
    PadicVector y;
    for (const auto& q : pc.components) y.push_back(evaluate(q, c));
    std::size_t gi;
    try {
      gi = g.piece_index(y);
    } catch (const Error& e) {
      fail(ErrorKind::CompositionUncertified, "image of " + pc.ball.to_string() + " leaves the outer domain");
    }
    const Ball& target = g.pieces()[gi].ball;
    if (image_check(pc, target, max_depth).status == BoundStatus::Holds) {
      cert.emplace(pc.ball, target);
      done.push_back(std::move(pc));
      continue;
    }
    if (depth >= max_refine)
      fail(ErrorKind::CompositionUncertified, "could not certify the image of " + pc.ball.to_string());
    for (auto& child : pc.ball.children()) work.emplace_back(Piece{child, pc.components}, depth + 1);
  }
  refined_f = FunctionModel(ctx, f.dim(), f.codim(), std::move(done));
  return cert;
}

FunctionModel compose(const FunctionModel& g, const FunctionModel& f) {
  FunctionModel refined;
  auto cert = find_certificate(g, f, refined);
  return compose(g, refined, cert);
}

Comparison check_chain_rule(const FunctionModel& f, const FunctionModel& g, const DQPoint& pt) {
  const FunctionModel h = compose(g, f);
  PadicVector lhs = dq1(h, pt);
  PadicVector rhs = dq1(g, DQPoint{f.eval(pt.x), dq1(f, pt), pt.t});
  return compare(std::move(lhs), std::move(rhs));
}

Comparison check_eval_derivative(const FunctionModel& gamma, const FunctionModel& eta, const DQPoint& pt) {
  if (pt.t.is_zero()) {
    // d/dtau of (gamma + tau eta)(x + tau y) at tau = 0.
    const PadicContext& ctx = gamma.context();
    const Jet tau = Jet::variable(ctx, 1, 1, 0);
    std::vector<Jet> jx;
    for (std::size_t i = 0; i < pt.x.size(); ++i) jx.push_back(Jet::constant(ctx, 1, 1, pt.x[i]) + pt.y[i] * tau);
    const auto g0 = gamma.eval(jx);
    const auto e0 = eta.eval(jx);
    PadicVector lhs;
    for (std::size_t i = 0; i < g0.size(); ++i) lhs.push_back((g0[i] + tau * e0[i]).last_coefficient(1).constant_term());
    return compare(std::move(lhs), dq1(gamma, pt) + eta.eval(pt.x));
  }
  const PadicVector moved = pt.x + pt.t * pt.y;
  const FunctionModel sum = gamma + pt.t * eta;
  PadicVector lhs = pt.t.inverse() * (sum.eval(moved) - gamma.eval(pt.x));
  PadicVector rhs = dq1(gamma, pt) + eta.eval(moved);
  return compare(std::move(lhs), std::move(rhs));
}

CompositionDerivativeReport check_composition_derivative(const FunctionModel& gamma, const FunctionModel& eta,
                                                         const FunctionModel& gamma1, const FunctionModel& eta1,
                                                         const Padic& t, std::span<const Padic> x) {
  if (t.is_zero()) fail(ErrorKind::InvalidArgument, "composition identity needs t != 0");
  CompositionDerivativeReport rep;
  const PadicContext& ctx = gamma.context();
  const PadicVector ex = eta.eval(x);
  const PadicVector e1x = eta1.eval(x);
  {
    const FunctionModel moved = compose(gamma + t * gamma1, eta + t * eta1);
    const FunctionModel base = compose(gamma, eta);
    PadicVector lhs = t.inverse() * (moved.eval(x) - base.eval(x));
    PadicVector rhs = dq1(gamma, DQPoint{ex, e1x, t}) + gamma1.eval(ex + t * e1x);
    rep.at_t = compare(std::move(lhs), std::move(rhs));
  }
  {
    // d/dtau of (gamma + tau gamma1)((eta + tau eta1)(x)) at tau = 0.
    const Jet tau = Jet::variable(ctx, 1, 1, 0);
    std::vector<Jet> pt;
    for (std::size_t i = 0; i < ex.size(); ++i)
      pt.push_back(Jet::constant(ctx, 1, 1, ex[i]) + e1x[i] * tau);
    auto g0 = gamma.eval(pt);
    auto g1 = gamma1.eval(pt);
    PadicVector lhs;
    for (std::size_t i = 0; i < g0.size(); ++i) lhs.push_back((g0[i] + tau * g1[i]).last_coefficient(1).constant_term());
    std::vector<PadicVector> dirs{e1x};
    PadicVector rhs = directional(gamma, ex, dirs) + gamma1.eval(ex);
    rep.at_zero = compare(std::move(lhs), std::move(rhs));
  }
  return rep;
}

namespace {

Ball project(const Ball& b, int from, int count) {
  std::vector<std::int64_t> c(b.center().begin() + from, b.center().begin() + from + count);
  return Ball(b.prime(), std::move(c), b.level());
}

mpq_class measure(const Region& r) {
  mpq_class m = 0;
  for (const auto& b : r.balls()) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(b.prime()),
                  static_cast<unsigned long>(b.level()) * static_cast<unsigned long>(b.dim()));
    m += mpq_class(1, den);
  }
  m.canonicalize();
  return m;
}

}  // namespace

FunctionModel curry(const FunctionModel& f, int du, std::span<const Padic> x) {
  const int d = f.dim();
  const int dv = d - du;
  if (du <= 0 || dv <= 0) fail(ErrorKind::InvalidArgument, "curry needs a split 0 < du < d");
  if (static_cast<int>(x.size()) != du) fail(ErrorKind::InvalidArgument, "curry point has the wrong dimension");
  const int p = f.domain().prime();
  std::vector<Ball> bu, bv;
  for (const auto& b : f.domain().balls()) {
    bu.push_back(project(b, 0, du));
    bv.push_back(project(b, du, dv));
  }
  Region U(p, du, bu), V(p, dv, bv);
  // The domain always sits inside U x V; equal measure forces equality.
  if (measure(f.domain()) != measure(U) * measure(V))
    fail(ErrorKind::NotProductPartition, "domain is not a product U x V");
  if (!U.contains(x)) fail(ErrorKind::OutOfDomain, "curry point lies outside U");
  const PadicContext& ctx = f.context();
  std::vector<Poly> args;
  for (int i = 0; i < du; ++i) args.push_back(Poly::constant(ctx, dv, x[i]));
  for (int i = 0; i < dv; ++i) args.push_back(Poly::variable(ctx, dv, i));
  std::vector<Piece> out;
  for (const auto& pc : f.pieces()) {
    if (!project(pc.ball, 0, du).contains(x)) continue;
    Piece slice{project(pc.ball, du, dv), {}};
    for (const auto& q : pc.components) slice.components.push_back(substitute(q, args));
    out.push_back(std::move(slice));
  }
  return FunctionModel(ctx, dv, f.codim(), std::move(out));
}

}  // namespace ucalc
