// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/diffeo.hpp"

#include <algorithm>

#include "ucalc/bounds.hpp"
#include "ucalc/calculus.hpp"

namespace ucalc {

int omega_threshold(int p) { return p == 2 ? 2 : 1; }

namespace {

Valuation required_range(const Ball& b) { return b.level() + omega_threshold(b.prime()); }

PadicVector local_to_global(const PadicContext& ctx, const Ball& b, std::span<const std::int64_t> z) {
  const Padic s = Padic::power_of_p(ctx, b.level());
  PadicVector x;
  for (int i = 0; i < b.dim(); ++i)
    x.push_back(Padic::from_integer(ctx, b.center()[i]) + s * Padic::from_integer(ctx, z[i]));
  return x;
}

std::string describe(const OmegaWitness& w) {
  std::string s = w.condition + " condition fails at x=" + to_string(w.x);
  if (w.condition != "range") s += ", y=" + to_string(w.y) + ", t=" + w.t.to_string();
  s += " (valuation " + (w.valuation == kInfiniteValuation ? std::string("inf") : std::to_string(w.valuation)) +
       " < " + std::to_string(w.required) + ")";
  return s;
}

}  // namespace

BallEndo BallEndo::make(const Ball& ball, FunctionModel sigma, int max_depth) {
  if (sigma.dim() != ball.dim() || sigma.codim() != ball.dim())
    fail(ErrorKind::InvalidArgument, "displacement must map into the ball's own dimension");
  if (!(sigma.domain() == Region(ball))) fail(ErrorKind::InvalidArgument, "displacement is not defined on the ball");
  BallEndo out;
  out.ball_ = ball;
  out.sigma_ = std::move(sigma);
  const FunctionModel gamma = out.gamma();
  for (const auto& pc : gamma.pieces()) {
    auto r = image_check(pc, ball, max_depth);
    if (r.status == BoundStatus::Holds) continue;
    if (r.status == BoundStatus::Fails) {
      const auto x = local_to_global(out.context(), pc.ball, r.witness);
      fail(ErrorKind::NotContained, "image of " + to_string(x) + " leaves " + ball.to_string());
    }
    fail(ErrorKind::NotContained, "range of piece " + pc.ball.to_string() + " undecided at depth " +
                                      std::to_string(max_depth));
  }
  return out;
}

BallEndo BallEndo::identity(const PadicContext& ctx, const Ball& ball) {
  BallEndo out;
  out.ball_ = ball;
  out.sigma_ = FunctionModel::zero(ctx, Region(ball), ball.dim());
  return out;
}

FunctionModel BallEndo::gamma() const { return FunctionModel::identity(context(), Region(ball_)) + sigma_; }

PadicVector BallEndo::eval(std::span<const Padic> x) const {
  PadicVector s = sigma_.eval(x);
  return x + std::span<const Padic>(s);
}

OmegaOutcome try_certify_omega(const BallEndo& endo, int level) {
  const PadicContext& ctx = endo.context();
  const Ball& B = endo.ball();
  const int d = B.dim();
  const int vmin = omega_threshold(B.prime());
  OmegaOutcome out;
  out.certificate.v_min = vmin;

  int jmax = B.level();
  for (const auto& pc : endo.sigma().pieces()) jmax = std::max(jmax, pc.ball.level());

  // Local expansions sigma(c + p^j z) per piece.
  std::vector<std::vector<Poly>> local;
  bool coefficient_bound = true;
  for (const auto& pc : endo.sigma().pieces()) {
    const PadicVector c = pc.ball.center_vector(ctx);
    const Padic s = Padic::power_of_p(ctx, pc.ball.level());
    std::vector<Poly> L;
    for (const auto& q : pc.components) {
      L.push_back(shift(q, c, s));
      if (L.back().min_coefficient_valuation() < vmin + jmax) coefficient_bound = false;
    }
    local.push_back(std::move(L));
  }
  if (coefficient_bound) {
    out.certified = true;
    out.certificate.method = OmegaMethod::CoefficientBound;
    out.certificate.level = 0;
    return out;
  }
  out.certificate.method = OmegaMethod::Exhaustive;
  out.certificate.level = level;

  const auto& pieces = endo.sigma().pieces();
  std::vector<PadicVector> centers, values;
  for (const auto& pc : pieces) {
    centers.push_back(pc.ball.center_vector(ctx));
    values.push_back(endo.sigma().eval(centers.back()));
  }

  // Displacement stays deep enough that gamma fixes the coset structure.
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Valuation v = norm_max(values[i]);
    if (v < required_range(B)) {
      out.witness = OmegaWitness{"range", centers[i], zero_vector(ctx, d), Padic(ctx), v, required_range(B)};
      out.reason = describe(*out.witness);
      return out;
    }
  }

  // Within each piece: sigma^[1](c + p^j z, w, p^j tau) = p^-j Q(z, w, tau).
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const int j = pieces[i].ball.level();
    std::vector<Poly> Q;
    for (const auto& L : local[i]) Q.push_back(difference_quotient(L));
    auto r = check_valuation_bound(Q, vmin + j, level);
    if (r.status == BoundStatus::Holds) continue;
    if (r.status == BoundStatus::Undecided) {
      out.reason = "quotient bound on " + pieces[i].ball.to_string() + " undecided at level " + std::to_string(level);
      return out;
    }
    OmegaWitness w;
    w.condition = "quotient";
    w.x = local_to_global(ctx, pieces[i].ball, std::span<const std::int64_t>(r.witness).subspan(0, d));
    for (int a = 0; a < d; ++a) w.y.push_back(Padic::from_integer(ctx, r.witness[d + a]));
    w.t = Padic::power_of_p(ctx, j) * Padic::from_integer(ctx, r.witness[2 * d]);
    PadicVector zw;
    for (auto zi : r.witness) zw.push_back(Padic::from_integer(ctx, zi));
    Valuation v = kInfiniteValuation;
    for (const auto& q : Q) v = std::min(v, evaluate(q, zw).valuation());
    w.valuation = v == kInfiniteValuation ? v : v - j;
    w.required = vmin;
    out.witness = std::move(w);
    out.reason = describe(*out.witness);
    return out;
  }

  // Across pieces the quotient is governed by the centers.
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t l = i + 1; l < pieces.size(); ++l) {
      const PadicVector dc = centers[l] - centers[i];
      const Valuation delta = norm_max(dc);
      const Valuation v = difference_valuation(values[l], values[i]);
      if (v >= vmin + delta) continue;
      OmegaWitness w;
      w.condition = "lipschitz";
      w.x = centers[i];
      w.t = Padic::power_of_p(ctx, delta);
      w.y = w.t.inverse() * dc;
      w.valuation = v - delta;
      w.required = vmin;
      out.witness = std::move(w);
      out.reason = describe(*out.witness);
      return out;
    }
  }
  out.certified = true;
  return out;
}

OmegaCertificate certify_omega(const BallEndo& endo, int level) {
  auto r = try_certify_omega(endo, level);
  if (!r.certified) fail(ErrorKind::NotCertified, r.reason);
  return r.certificate;
}

CertifiedDiffeo CertifiedDiffeo::certify(const BallEndo& endo, int level) {
  return CertifiedDiffeo(endo, certify_omega(endo, level));
}

CertifiedDiffeo CertifiedDiffeo::identity(const PadicContext& ctx, const Ball& ball) {
  OmegaCertificate c;
  c.v_min = omega_threshold(ball.prime());
  return CertifiedDiffeo(BallEndo::identity(ctx, ball), c);
}

IsometryReport isometry_check(const CertifiedDiffeo& g,
                              const std::vector<std::pair<PadicVector, PadicVector>>& pairs) {
  IsometryReport rep;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    ++rep.checked;
    const PadicVector gx = g.eval(x), gy = g.eval(y);
    if (difference_valuation(gx, gy) != difference_valuation(x, y)) rep.violations.push_back(i);
  }
  return rep;
}

int inversion_budget(Valuation target, int v_min) {
  return static_cast<int>((std::max<Valuation>(target, 0) + v_min - 1) / v_min) + 2;
}

std::vector<std::int64_t> residues(std::span<const Padic> x, int p, int L) {
  std::vector<std::int64_t> out;
  for (const auto& xi : x) {
    if (!xi.is_zero() && xi.context().prime() != p) fail(ErrorKind::ContextMismatch, "point over another prime");
    out.push_back(xi.is_zero() ? 0 : xi.residue(L).get_si());
  }
  return out;
}

namespace {

PadicVector reduce(const PadicContext& ctx, std::span<const Padic> x, Valuation T) {
  PadicVector out;
  for (const auto& xi : x) out.push_back(Padic::from_integer(ctx, xi.residue(T)));
  return out;
}

}  // namespace

PadicVector invert_at(const CertifiedDiffeo& g, std::span<const Padic> y, Valuation target, int* iterations) {
  const PadicContext& ctx = g.context();
  const Ball& B = g.ball();
  if (!B.contains(y)) fail(ErrorKind::OutOfDomain, to_string(y) + " is not in " + B.to_string());
  const Valuation T = std::max<Valuation>(target, B.level());
  const int cap = inversion_budget(T, g.v_min());
  const PadicVector yr = reduce(ctx, y, T);
  PadicVector x = yr;
  for (int n = 1; n <= cap; ++n) {
    PadicVector s = g.sigma().eval(x);
    PadicVector next = reduce(ctx, yr - s, T);
    if (next == x) {
      if (iterations) *iterations = n;
      return next;
    }
    x = std::move(next);
  }
  fail(ErrorKind::IterationBudgetExceeded,
       "no fixed point mod p^" + std::to_string(T) + " after " + std::to_string(cap) + " steps");
}

Ball preimage_ball(const CertifiedDiffeo& g, const Ball& b) {
  if (!g.ball().contains(b)) fail(ErrorKind::NotContained, b.to_string() + " is not inside " + g.ball().to_string());
  const PadicVector a = invert_at(g, b.center_vector(g.context()), b.level());
  return Ball(b.prime(), residues(a, b.prime(), b.level()), b.level());
}

CertifiedDiffeo compose_diffeos(const CertifiedDiffeo& g1, const CertifiedDiffeo& g2, int level) {
  if (!(g1.ball() == g2.ball())) fail(ErrorKind::InvalidArgument, "diffeos live on different balls");
  if (g1.is_identity()) return g2;
  if (g2.is_identity()) return g1;
  // Pull the pieces of sigma1 back through gamma2 and intersect with gamma2's pieces.
  std::vector<std::pair<Ball, Ball>> pulled;
  for (const auto& pc : g1.sigma().pieces()) pulled.emplace_back(preimage_ball(g2, pc.ball), pc.ball);
  std::vector<Ball> refined;
  CompositionCertificate cert;
  for (const auto& pc : g2.sigma().pieces()) {
    for (const auto& [pre, img] : pulled) {
      std::optional<Ball> meet;
      switch (ball_relation(pc.ball, pre)) {
        case BallRelation::Equal:
        case BallRelation::SecondContainsFirst: meet = pc.ball; break;
        case BallRelation::FirstContainsSecond: meet = pre; break;
        case BallRelation::Disjoint: break;
      }
      if (!meet) continue;
      refined.push_back(*meet);
      cert.emplace(*meet, img);
    }
  }
  const FunctionModel gamma2 = g2.endo().gamma().refine(refined);
  FunctionModel pulled_sigma;
  try {
    pulled_sigma = compose(g1.sigma(), gamma2, cert, level);
  } catch (const Error& e) {
    fail(ErrorKind::NotCertified, std::string("composition certificate rejected: ") + e.what());
  }
  FunctionModel sigma = g2.sigma() + pulled_sigma;
  BallEndo endo;
  try {
    endo = BallEndo::make(g1.ball(), std::move(sigma), level);
  } catch (const Error& e) {
    fail(ErrorKind::NotCertified, std::string("composite range check failed: ") + e.what());
  }
  return CertifiedDiffeo::certify(endo, level);
}

std::vector<PadicVector> coset_representatives(const PadicContext& ctx, const Ball& ball, int m) {
  std::vector<PadicVector> out;
  const std::int64_t q = ipow(ball.prime(), m);
  const int d = ball.dim();
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  out.reserve(static_cast<std::size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<std::int64_t> z(d);
    std::int64_t r = idx;
    for (int i = 0; i < d; ++i) {
      z[i] = r % q;
      r /= q;
    }
    out.push_back(local_to_global(ctx, ball, z));
  }
  return out;
}

std::int64_t coset_index(const Ball& ball, int m, std::span<const Padic> x) {
  if (!ball.contains(x)) fail(ErrorKind::OutOfDomain, to_string(x) + " is not in " + ball.to_string());
  const int k = ball.level();
  const std::int64_t step = ipow(ball.prime(), k);
  const std::int64_t q = ipow(ball.prime(), m);
  const auto r = residues(x, ball.prime(), k + m);
  std::int64_t idx = 0, scale = 1;
  for (int i = 0; i < ball.dim(); ++i) {
    const std::int64_t zi = ((r[i] - ball.center()[i]) / step) % q;
    idx += ((zi + q) % q) * scale;
    scale *= q;
  }
  return idx;
}

Permutation induced_level_map(const CertifiedDiffeo& g, int m) {
  if (m < 0) fail(ErrorKind::InvalidArgument, "negative level");
  Permutation out;
  for (const auto& c : coset_representatives(g.context(), g.ball(), m)) out.push_back(coset_index(g.ball(), m, g.eval(c)));
  return out;
}

Permutation compose_permutations(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "permutations of different sizes");
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

Permutation invert_permutation(const Permutation& a) {
  Permutation out(a.size(), -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto& slot = out.at(static_cast<std::size_t>(a[i]));
    if (slot != -1) fail(ErrorKind::NotBijective, "not a permutation");
    slot = static_cast<std::int64_t>(i);
  }
  return out;
}

bool is_identity_permutation(const Permutation& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != static_cast<std::int64_t>(i)) return false;
  return true;
}

DiffeoWord::DiffeoWord(CertifiedDiffeo g) : ball_(g.ball()) {
  if (!g.is_identity()) factors_.push_back({std::make_shared<const CertifiedDiffeo>(std::move(g)), false});
}

PadicVector DiffeoWord::eval(const PadicContext& ctx, std::span<const Padic> x, Valuation precision) const {
  const Valuation T = std::max<Valuation>(precision, ball_.level());
  PadicVector cur = reduce(ctx, x, T);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (it->inverse)
      cur = invert_at(*it->map, cur, T);
    else
      cur = reduce(ctx, it->map->eval(cur), T);
  }
  return cur;
}

Permutation DiffeoWord::induced(const PadicContext& ctx, int m) const {
  Permutation out;
  const Valuation T = ball_.level() + m;
  for (const auto& c : coset_representatives(ctx, ball_, m)) out.push_back(coset_index(ball_, m, eval(ctx, c, T)));
  return out;
}

DiffeoWord DiffeoWord::inverse() const {
  DiffeoWord out(ball_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) out.factors_.push_back({it->map, !it->inverse});
  return out;
}

namespace {

constexpr int kMergeDegree = 9;

int map_degree(const CertifiedDiffeo& g) {
  int deg = 1;
  for (const auto& pc : g.sigma().pieces())
    for (const auto& q : pc.components) deg = std::max(deg, q.degree());
  return deg;
}

}  // namespace

void DiffeoWord::push_back(Factor f) {
  if (!factors_.empty()) {
    Factor& last = factors_.back();
    if (last.map == f.map && last.inverse != f.inverse) {
      factors_.pop_back();
      return;
    }
    if (!last.inverse && !f.inverse && map_degree(*last.map) * map_degree(*f.map) <= kMergeDegree) {
      auto merged = compose_diffeos(*last.map, *f.map);
      factors_.pop_back();
      if (!merged.is_identity()) factors_.push_back({std::make_shared<const CertifiedDiffeo>(std::move(merged)), false});
      return;
    }
  }
  factors_.push_back(std::move(f));
}

DiffeoWord operator*(const DiffeoWord& a, const DiffeoWord& b) {
  if (!(a.ball_ == b.ball_)) fail(ErrorKind::InvalidArgument, "words on different balls");
  DiffeoWord out = a;
  for (const auto& f : b.factors_) out.push_back(f);
  return out;
}

void AffineIsometry::validate() const {
  if (source.level() != target.level() || source.dim() != target.dim() || source.prime() != target.prime())
    fail(ErrorKind::InvalidArgument, "affine identification needs balls of one level and dimension");
  if (u.is_zero() || u.valuation() != 0) fail(ErrorKind::InvalidArgument, "affine identification needs a unit factor");
}

PadicVector AffineIsometry::apply(std::span<const Padic> x) const {
  const PadicContext& ctx = u.context();
  PadicVector out;
  for (int i = 0; i < source.dim(); ++i)
    out.push_back(Padic::from_integer(ctx, target.center()[i]) +
                  u * (x[i] - Padic::from_integer(ctx, source.center()[i])));
  return out;
}

AffineIsometry AffineIsometry::inverse() const { return AffineIsometry{target, source, u.inverse()}; }

PadicVector AffineIsometry::apply_inverse(std::span<const Padic> x) const { return inverse().apply(x); }

CertifiedDiffeo conjugate_affine(const CertifiedDiffeo& g, const AffineIsometry& psi, int level) {
  psi.validate();
  if (!(g.ball() == psi.source)) fail(ErrorKind::InvalidArgument, "conjugating map starts at a different ball");
  const PadicContext& ctx = g.context();
  const int d = g.ball().dim();
  if (g.is_identity()) return CertifiedDiffeo::identity(ctx, psi.target);
  // sigma'(x) = u sigma(psi^-1 x), psi^-1 x = c + u^-1 (x - d).
  const Padic uinv = psi.u.inverse();
  std::vector<Poly> back;
  for (int i = 0; i < d; ++i) {
    Poly q = uinv * Poly::variable(ctx, d, i);
    q += Poly::constant(ctx, d,
                        Padic::from_integer(ctx, psi.source.center()[i]) -
                            uinv * Padic::from_integer(ctx, psi.target.center()[i]));
    back.push_back(std::move(q));
  }
  std::vector<Piece> pieces;
  for (const auto& pc : g.sigma().pieces()) {
    const PadicVector img = psi.apply(pc.ball.center_vector(ctx));
    Piece np{Ball(pc.ball.prime(), residues(img, pc.ball.prime(), pc.ball.level()), pc.ball.level()), {}};
    for (const auto& q : pc.components) np.components.push_back(psi.u * substitute(q, back));
    pieces.push_back(std::move(np));
  }
  FunctionModel sigma(ctx, d, d, std::move(pieces));
  return CertifiedDiffeo::certify(BallEndo::make(psi.target, std::move(sigma), level), level);
}

DiffeoWord conjugate_affine(const DiffeoWord& w, const AffineIsometry& psi, int level) {
  if (!(w.ball() == psi.source)) fail(ErrorKind::InvalidArgument, "conjugating map starts at a different ball");
  DiffeoWord out(psi.target);
  for (const auto& f : w.factors()) {
    DiffeoWord piece(conjugate_affine(*f.map, psi, level));
    out = out * (f.inverse ? piece.inverse() : piece);
  }
  return out;
}

CompactlySupportedEndo CompactlySupportedEndo::make(const Region& U, FunctionModel sigma, int max_depth) {
  if (!(sigma.domain() == U)) fail(ErrorKind::InvalidArgument, "displacement is not defined on the region");
  if (sigma.codim() != U.dim()) fail(ErrorKind::InvalidArgument, "displacement has the wrong codimension");
  CompactlySupportedEndo out;
  out.U_ = U;
  const FunctionModel gamma = FunctionModel::identity(sigma.context(), U) + sigma;
  for (const auto& pc : gamma.pieces()) {
    const Ball* home = nullptr;
    for (const auto& b : U.balls())
      if (b.contains(pc.ball)) home = &b;
    if (!home) fail(ErrorKind::CertificateInvalid, pc.ball.to_string() + " is not inside a ball of the region");
    auto r = image_check(pc, *home, max_depth);
    if (r.status != BoundStatus::Holds)
      fail(ErrorKind::CertificateInvalid, "range of " + pc.ball.to_string() + " not certified inside the region");
  }
  std::vector<Ball> supp;
  for (const auto& pc : sigma.pieces()) {
    const bool zero = std::all_of(pc.components.begin(), pc.components.end(), [](const Poly& q) { return q.is_zero(); });
    if (!zero) supp.push_back(pc.ball);
  }
  out.support_ = Region(U.prime(), U.dim(), supp);
  out.sigma_ = std::move(sigma);
  return out;
}

CompactlySupportedEndo CompactlySupportedEndo::identity(const PadicContext& ctx, const Region& U) {
  return make(U, FunctionModel::zero(ctx, U, U.dim()));
}

PadicVector CompactlySupportedEndo::eval(std::span<const Padic> x) const {
  PadicVector s = sigma_.eval(x);
  return x + std::span<const Padic>(s);
}

CompactlySupportedEndo endo_compose(const CompactlySupportedEndo& a, const CompactlySupportedEndo& b) {
  if (!(a.region() == b.region())) fail(ErrorKind::InvalidArgument, "endomorphisms of different regions");
  const PadicContext& ctx = a.context();
  const FunctionModel gamma_b = FunctionModel::identity(ctx, b.region()) + b.sigma();
  FunctionModel pulled;
  try {
    pulled = compose(a.sigma(), gamma_b);
  } catch (const Error& e) {
    fail(ErrorKind::CertificateInvalid, std::string("no composition certificate: ") + e.what());
  }
  return CompactlySupportedEndo::make(a.region(), b.sigma() + pulled);
}

MembershipDecision diffc_membership(const CompactlySupportedEndo& a, int level) {
  MembershipDecision out;
  out.accepted = true;
  if (a.support().empty()) return out;
  for (const auto& B : decompose(a.support())) {
    BallEndo endo;
    try {
      endo = BallEndo::make(B, a.sigma().restrict_to(Region(B)), level);
    } catch (const Error& e) {
      out.accepted = false;
      out.rejected_ball = B;
      out.reason = e.what();
      out.certificates.clear();
      return out;
    }
    auto r = try_certify_omega(endo, level);
    if (!r.certified) {
      out.accepted = false;
      out.rejected_ball = B;
      out.witness = r.witness;
      out.reason = r.reason;
      out.certificates.clear();
      return out;
    }
    out.certificates.emplace_back(std::move(endo), r.certificate);
  }
  return out;
}

std::vector<std::vector<std::int64_t>> region_points(const Region& U, int L) {
  std::vector<std::vector<std::int64_t>> out;
  for (auto& z : level_points(U.prime(), U.dim(), L)) {
    bool in = false;
    for (const auto& b : U.balls()) {
      if (b.level() > L) fail(ErrorKind::InvalidArgument, "region is finer than the requested level");
      const std::int64_t m = ipow(b.prime(), b.level());
      bool inside = true;
      for (int i = 0; i < b.dim(); ++i)
        if (z[i] % m != b.center()[i]) inside = false;
      if (inside) in = true;
    }
    if (in) out.push_back(std::move(z));
  }
  return out;
}

}  // namespace ucalc
