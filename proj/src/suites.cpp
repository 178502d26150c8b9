// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/suites.hpp"

#include <array>
#include <chrono>
#include <functional>
#include <map>

#include "ucalc/calculus.hpp"
#include "ucalc/rng.hpp"
#include "ucalc/weakprod.hpp"

namespace ucalc {

void SuiteConfig::validate() const {
  if (p && !is_prime(*p)) fail(ErrorKind::ConfigInvalid, "p = " + std::to_string(*p) + " is not prime");
  auto positive = [](int v, const char* name) {
    if (v < 1) fail(ErrorKind::ConfigInvalid, std::string(name) + " must be positive");
  };
  positive(d, "d");
  positive(e, "e");
  positive(N, "N");
  positive(m, "m");
  positive(samples, "samples");
  positive(deg, "deg");
  positive(pairs, "pairs");
  if (k < 0 || k > 4) fail(ErrorKind::ConfigInvalid, "k must lie in 0..4");
  if (d > 3) fail(ErrorKind::ConfigInvalid, "d must be at most 3");
  if (m > 6) fail(ErrorKind::ConfigInvalid, "m must be at most 6");
}

Json SuiteConfig::to_json() const {
  return Json{{"seed", seed}, {"p", p ? Json(*p) : Json(nullptr)},
              {"d", d},       {"e", e},
              {"N", N},       {"m", m},
              {"samples", samples}, {"pairs", pairs},
              {"deg", deg},   {"k", k}};
}

Json Report::to_json() const {
  return Json{{"suite", suite},
              {"config", config.to_json()},
              {"checks_run", run},
              {"checks_passed", passed},
              {"passed", ok()},
              {"witness", witness ? *witness : Json(nullptr)},
              {"wall_time_s", seconds}};
}

namespace {

class Checks {
 public:
  explicit Checks(Report& r) : r_(r) {}

  void sample(std::int64_t i) { sample_ = i; }

  void check(bool ok, const std::function<Json()>& witness) {
    ++r_.run;
    if (ok) {
      ++r_.passed;
      return;
    }
    if (r_.witness) return;
    Json w = witness();
    w["sample"] = sample_;
    r_.witness = std::move(w);
  }

  void compare(const Comparison& c, const std::function<Json()>& inputs) {
    check(c.equal, [&] { return Json{{"inputs", inputs()}, {"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}}; });
  }

  void error(const Error& e) {
    check(false, [&] { return Json{{"error", e.what()}}; });
  }

 private:
  Report& r_;
  std::int64_t sample_ = 0;
};

int prime_for(const SuiteConfig& cfg, int i) { return cfg.p ? *cfg.p : std::array<int, 3>{2, 3, 5}[i % 3]; }
int dim_for(const SuiteConfig& cfg, int i) { return 1 + (i / 3) % cfg.d; }

Json point_json(const DQPoint& pt) {
  return Json{{"x", to_json(pt.x)}, {"y", to_json(pt.y)}, {"t", to_json(pt.t)}};
}

// Integer membership: z lies in center + p^k Z_p^d.
bool member(const Ball& b, const std::vector<std::int64_t>& z) {
  const std::int64_t m = ipow(b.prime(), b.level());
  for (std::size_t i = 0; i < z.size(); ++i)
    if (((z[i] % m) + m) % m != b.center()[i]) return false;
  return true;
}

bool member(const Region& r, const std::vector<std::int64_t>& z) {
  for (const auto& b : r.balls())
    if (member(b, z)) return true;
  return false;
}

Region random_region(Rng& rng, int p, int d) {
  std::vector<Ball> balls;
  const int n = static_cast<int>(rng.uniform(1, 4));
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(rng.uniform(0, 2));
    std::vector<std::int64_t> c(d);
    for (auto& ci : c) ci = rng.uniform(0, ipow(p, k) - 1);
    balls.emplace_back(p, c, k);
  }
  return Region(p, d, balls);
}

// ---- calculus -------------------------------------------------------------

void chain_rule(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  auto f = random_model(ctx, random_partition(p, d, rng, 2, 1), d, cfg.deg, rng);
  auto g = random_model(ctx, random_partition(p, d, rng, 2, 1), cfg.e, cfg.deg, rng);
  DQPoint pt{random_point(ctx, Ball::unit(p, d), rng, 2), random_point(ctx, Ball::unit(p, d), rng, 2),
             i % 4 == 0 ? Padic(ctx) : random_padic(ctx, rng, 0, 2, 2)};
  ck.compare(check_chain_rule(f, g, pt), [&] { return Json{{"f", to_json(f)}, {"g", to_json(g)}, {"point", point_json(pt)}}; });
}

void scaling(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int k = cfg.k ? cfg.k : 1 + i % 3;
  const int p = prime_for(cfg, i / 3), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  auto f = random_model(ctx, std::vector<Ball>{Ball::unit(p, d)}, cfg.e, cfg.deg, rng);
  std::vector<PadicVector> xs;
  for (int n = 0; n < (1 << k); ++n) xs.push_back(random_point(ctx, Ball::unit(p, d), rng, 2));
  PadicVector s;
  for (int n = 0; n < (1 << k) - 1; ++n) s.push_back(random_padic(ctx, rng, 0, 2, 2));
  // Every other sample uses t = 1, where both sides agree trivially.
  const Padic t = i % 2 ? random_padic(ctx, rng, 0, 1, 2, false) : Padic::from_integer(ctx, 1);
  auto inputs = [&] {
    Json x = Json::array();
    for (const auto& v : xs) x.push_back(to_json(v));
    return Json{{"f", to_json(f)}, {"k", k}, {"xs", x}, {"s", to_json(s)}, {"t", to_json(t)}};
  };
  ck.compare(check_scaling(f, k, xs, s, t), inputs);
}

void bilinear(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  // Linear lambda: Q_p^d -> Q_p^e.
  std::vector<PadicVector> rows(static_cast<std::size_t>(cfg.e));
  for (auto& r : rows)
    for (int c = 0; c < d; ++c) r.push_back(random_padic(ctx, rng, -1, 2, 3));
  auto lam = FunctionModel::linear(ctx, Region(Ball::unit(p, d)), rows);
  DQPoint pt{random_point(ctx, Ball::unit(p, d), rng), random_point(ctx, Ball::unit(p, d), rng),
             i % 5 == 0 ? Padic(ctx) : random_padic(ctx, rng, 0, 2, 2)};
  ck.compare(compare(dq1(lam, pt), lam.eval(pt.y)), [&] { return Json{{"linear", to_json(lam)}, {"point", point_json(pt)}}; });

  // beta(v, w) = sum b_ab v_a w_b on Q_p^d x Q_p^d.
  std::vector<std::vector<Padic>> b(static_cast<std::size_t>(d));
  Poly q(ctx, 2 * d);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) {
      b[a].push_back(random_padic(ctx, rng, -1, 2, 3));
      Exponents ex(static_cast<std::size_t>(2 * d), 0);
      ex[a] = 1;
      ex[d + c] = 1;
      if (!b[a][c].is_zero()) q.add_term(ex, b[a][c]);
    }
  auto beta_f = FunctionModel::uniform(ctx, Region(Ball::unit(p, 2 * d)), {q});
  auto beta = [&](std::span<const Padic> v, std::span<const Padic> w) {
    Padic s(ctx);
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) s = s + b[a][c] * v[a] * w[c];
    return s;
  };
  DQPoint bp{random_point(ctx, Ball::unit(p, 2 * d), rng), random_point(ctx, Ball::unit(p, 2 * d), rng),
             i % 5 == 0 ? Padic(ctx) : random_padic(ctx, rng, 0, 2, 2)};
  auto head = [&](const PadicVector& z) { return std::span<const Padic>(z).first(static_cast<std::size_t>(d)); };
  auto tail = [&](const PadicVector& z) { return std::span<const Padic>(z).last(static_cast<std::size_t>(d)); };
  PadicVector closed{beta(head(bp.x), tail(bp.y)) + beta(head(bp.y), tail(bp.x)) + bp.t * beta(head(bp.y), tail(bp.y))};
  ck.compare(compare(dq1(beta_f, bp), closed), [&] { return Json{{"bilinear", to_json(beta_f)}, {"point", point_json(bp)}}; });
}

void eval_deriv(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  auto gamma = random_model(ctx, random_partition(p, d, rng, 1, 1), d, cfg.deg, rng);
  auto eta = random_model(ctx, random_partition(p, d, rng, 1, 1), d, cfg.deg, rng);
  DQPoint pt{random_point(ctx, Ball::unit(p, d), rng, 2), random_point(ctx, Ball::unit(p, d), rng, 2),
             i % 4 == 0 ? Padic(ctx) : random_padic(ctx, rng, 0, 2, 2, false)};
  ck.compare(check_eval_derivative(gamma, eta, pt),
             [&] { return Json{{"gamma", to_json(gamma)}, {"eta", to_json(eta)}, {"point", point_json(pt)}}; });
}

void comp_deriv(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  auto gamma = random_model(ctx, random_partition(p, d, rng, 1, 1), cfg.e, cfg.deg, rng);
  auto gamma1 = random_model(ctx, random_partition(p, d, rng, 1, 1), cfg.e, cfg.deg, rng);
  auto eta = random_model(ctx, std::vector<Ball>{Ball::unit(p, d)}, d, cfg.deg, rng);
  auto eta1 = random_model(ctx, std::vector<Ball>{Ball::unit(p, d)}, d, cfg.deg, rng);
  const PadicVector x = random_point(ctx, Ball::unit(p, d), rng, 2);
  const Padic t = random_padic(ctx, rng, 1, 2, 2, false);
  auto r = check_composition_derivative(gamma, eta, gamma1, eta1, t, x);
  auto inputs = [&] {
    return Json{{"gamma", to_json(gamma)}, {"eta", to_json(eta)}, {"gamma1", to_json(gamma1)},
                {"eta1", to_json(eta1)},   {"t", to_json(t)},       {"x", to_json(x)}};
  };
  ck.compare(r.at_t, inputs);
  ck.compare(r.at_zero, inputs);
}

// ---- geometry -------------------------------------------------------------

int partition_dim(int p, const SuiteConfig& cfg) { return p == 2 ? std::min(cfg.d, 2) : 1; }

void partition(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = partition_dim(p, cfg);
  Region region = random_region(rng, p, d);
  std::vector<Region> cover;
  for (int c = 0; c < 3; ++c) cover.push_back(random_region(rng, p, d));
  cover.push_back(region);
  auto parts = subordinate_partition(region, cover);
  auto inputs = [&] {
    PadicContext ctx(p, cfg.N);
    Json cj = Json::array();
    for (const auto& c : cover) cj.push_back(to_json(c, ctx));
    return Json{{"region", to_json(region, ctx)}, {"cover", cj}};
  };
  std::int64_t overlaps = 0, gaps = 0, strays = 0, unsubordinate = 0;
  for (const auto& z : level_points(p, d, cfg.m)) {
    int hits = 0;
    for (const auto& ab : parts) {
      if (!member(ab.ball, z)) continue;
      ++hits;
      if (!member(cover[ab.cover_index], z)) ++unsubordinate;
    }
    const bool in = member(region, z);
    if (in && hits == 0) ++gaps;
    if (hits > 1) ++overlaps;
    if (!in && hits > 0) ++strays;
  }
  ck.check(overlaps == 0, [&] { return Json{{"inputs", inputs()}, {"property", "disjoint"}, {"violations", overlaps}}; });
  ck.check(gaps == 0 && strays == 0, [&] {
    return Json{{"inputs", inputs()}, {"property", "covers exactly"}, {"violations", gaps + strays}};
  });
  ck.check(unsubordinate == 0,
           [&] { return Json{{"inputs", inputs()}, {"property", "subordinate"}, {"violations", unsubordinate}}; });
  auto canon = decompose(region);
  ck.check(decompose(Region(p, d, canon)) == canon,
           [&] { return Json{{"inputs", inputs()}, {"property", "decompose is idempotent"}}; });
}

void unity(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = partition_dim(p, cfg);
  PadicContext ctx(p, cfg.N);
  Region region = random_region(rng, p, d);
  std::vector<Region> cover;
  for (int c = 0; c < 3; ++c) cover.push_back(random_region(rng, p, d));
  cover.push_back(region);
  auto h = partition_of_unity(region, cover);
  std::int64_t bad_sum = 0, bad_support = 0;
  for (const auto& z : level_points(p, d, cfg.m)) {
    const PadicVector x = integer_vector(ctx, z);
    int sum = 0;
    for (std::size_t c = 0; c < h.size(); ++c) {
      const int hv = h[c](x);
      sum += hv;
      if (hv && !member(cover[c], z)) ++bad_support;
    }
    if (sum != (member(region, z) ? 1 : 0)) ++bad_sum;
  }
  auto inputs = [&] {
    Json cj = Json::array();
    for (const auto& c : cover) cj.push_back(to_json(c, ctx));
    return Json{{"region", to_json(region, ctx)}, {"cover", cj}};
  };
  ck.check(bad_sum == 0, [&] { return Json{{"inputs", inputs()}, {"property", "sum is 1"}, {"violations", bad_sum}}; });
  ck.check(bad_support == 0,
           [&] { return Json{{"inputs", inputs()}, {"property", "supports subordinate"}, {"violations", bad_support}}; });

  // Cut-off: K inside U, h = 1 on K and 0 off U.
  const Region U = region;
  const Region K = intersect(U, random_region(rng, p, d));
  if (K.empty()) return;
  const Indicator w = cutoff(K, U);
  std::int64_t bad = 0;
  for (const auto& z : level_points(p, d, cfg.m)) {
    const int hv = w(integer_vector(ctx, z));
    if (member(K, z) && hv != 1) ++bad;
    if (!member(U, z) && hv != 0) ++bad;
  }
  ck.check(bad == 0, [&] {
    return Json{{"K", to_json(K, ctx)}, {"U", to_json(U, ctx)}, {"property", "cutoff"}, {"violations", bad}};
  });
}

// ---- diffeomorphisms ------------------------------------------------------

void omega_isometry(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  const Ball B = Ball::unit(p, cfg.d);
  auto g = random_diffeo(ctx, B, rng, cfg.deg);
  std::vector<std::pair<PadicVector, PadicVector>> pairs;
  for (int n = 0; n < cfg.pairs; ++n) pairs.emplace_back(random_point(ctx, B, rng, 6), random_point(ctx, B, rng, 6));
  auto rep = isometry_check(g, pairs);
  ck.check(rep.violations.empty() && rep.checked == static_cast<std::size_t>(cfg.pairs), [&] {
    Json w{{"diffeo", to_json(g.endo())}};
    if (!rep.violations.empty()) {
      const auto& [x, y] = pairs[rep.violations.front()];
      w["x"] = to_json(x);
      w["y"] = to_json(y);
      w["lhs"] = norm_max(g.eval(x) - g.eval(y));
      w["rhs"] = norm_max(x - y);
    }
    return w;
  });
}

void inversion(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  const Ball B = Ball::unit(p, cfg.d);
  auto g = random_diffeo(ctx, B, rng, cfg.deg);
  const int budget = inversion_budget(cfg.N, g.v_min());
  std::int64_t residual_failures = 0, budget_failures = 0;
  std::optional<Json> first;
  for (int n = 0; n < cfg.pairs; ++n) {
    const PadicVector y = random_point(ctx, B, rng, cfg.N);
    int steps = 0;
    const PadicVector x = invert_at(g, y, cfg.N, &steps);
    const Valuation res = difference_valuation(g.eval(x), y);
    if (res < cfg.N) ++residual_failures;
    if (steps > budget) ++budget_failures;
    if ((res < cfg.N || steps > budget) && !first)
      first = Json{{"y", to_json(y)}, {"x", to_json(x)}, {"residual_valuation", res}, {"iterations", steps}};
  }
  auto witness = [&] {
    Json w{{"diffeo", to_json(g.endo())}, {"budget", budget}};
    if (first) w["point"] = *first;
    return w;
  };
  ck.check(residual_failures == 0, witness);
  ck.check(budget_failures == 0, witness);
  const DiffeoWord w(g);
  const Permutation round = compose_permutations(induced_level_map(g, cfg.m), w.inverse().induced(ctx, cfg.m));
  ck.check(is_identity_permutation(round), [&] { return Json{{"diffeo", to_json(g.endo())}, {"lhs", round}}; });
}

std::vector<Ball> eight_balls(int p) {
  int level = 1;
  while (ipow(p, level) < 8) ++level;
  std::vector<Ball> out;
  for (std::int64_t c = 0; c < 8; ++c) out.emplace_back(p, std::vector<std::int64_t>{c}, level);
  return out;
}

Region union_of(const std::set<Ball>& balls) {
  const Ball& b = *balls.begin();
  return Region(b.prime(), b.dim(), std::vector<Ball>(balls.begin(), balls.end()));
}

Permutation perm(const BallProduct& x, const PadicContext& ctx, int L) {
  return region_permutation(union_of(x.index()), L, [&](std::span<const Padic> z) { return apply(x, ctx, z, L); },
                            ctx);
}

BallProduct random_product(const PadicContext& ctx, const std::vector<Ball>& balls, Rng& rng, int support) {
  BallProduct x(std::set<Ball>(balls.begin(), balls.end()));
  for (int s = 0; s < support; ++s) {
    const Ball& b = balls[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(balls.size()) - 1))];
    x.set(b, DiffeoWord(random_diffeo(ctx, b, rng, 2, 1, 1)));
  }
  return x;
}

void group_axioms(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  // Composition is a homomorphism to the induced maps.
  {
    const Ball B = Ball::unit(p, cfg.d);
    auto g1 = random_diffeo(ctx, B, rng, 2), g2 = random_diffeo(ctx, B, rng, 2);
    auto h = compose_diffeos(g1, g2);
    for (int m = 1; m <= cfg.m; ++m) {
      const Permutation lhs = induced_level_map(h, m);
      const Permutation rhs = compose_permutations(induced_level_map(g1, m), induced_level_map(g2, m));
      ck.check(lhs == rhs, [&] {
        return Json{{"law", "induced(g1 g2) = induced(g1) induced(g2)"}, {"m", m}, {"g1", to_json(g1.endo())},
                    {"g2", to_json(g2.endo())}, {"lhs", lhs}, {"rhs", rhs}};
      });
    }
  }
  // Weak products over eight balls.
  const auto balls = eight_balls(p);
  const int L = balls.front().level() + cfg.m;
  auto a = random_product(ctx, balls, rng, 3), b = random_product(ctx, balls, rng, 3),
       c = random_product(ctx, balls, rng, 3);
  auto law = [&](const char* name, const Permutation& lhs, const Permutation& rhs) {
    ck.check(lhs == rhs, [&] { return Json{{"law", name}, {"level", L}, {"lhs", lhs}, {"rhs", rhs}}; });
  };
  const Permutation pa = perm(a, ctx, L), pb = perm(b, ctx, L);
  law("associativity", perm((a * b) * c, ctx, L), perm(a * (b * c), ctx, L));
  ck.check((a * a.inverse()).is_identity() && (a.inverse() * a).is_identity(),
           [&] { return Json{{"law", "inverse"}}; });
  BallProduct e(a.index());
  law("identity", perm(a * e, ctx, L), pa);
  law("product", perm(a * b, ctx, L), compose_permutations(pa, pb));
  law("inverse on points", compose_permutations(pa, perm(a.inverse(), ctx, L)), perm(e, ctx, L));

  // Regroup over the children of each ball.
  std::map<Ball, std::vector<Ball>> fibers;
  std::set<std::pair<Ball, Ball>> K;
  for (const auto& bl : balls) {
    fibers[bl] = bl.children();
    for (const auto& j : fibers[bl]) K.emplace(bl, j);
  }
  using Flat = WeakProduct<std::pair<Ball, Ball>, DiffeoWord>;
  auto sample = [&] {
    Flat x(K);
    for (int s = 0; s < 3; ++s) {
      auto it = K.begin();
      std::advance(it, rng.uniform(0, static_cast<std::int64_t>(K.size()) - 1));
      x.set(*it, DiffeoWord(random_diffeo(ctx, it->second, rng, 2, 1, 1)));
    }
    return x;
  };
  auto flat_perm = [&](const Flat& x) {
    std::set<Ball> idx;
    for (const auto& [i0, j] : x.index()) idx.insert(j);
    BallProduct y(idx);
    for (const auto& [k, w] : x.entries()) y.set(k.second, w);
    return perm(y, ctx, L + 1);
  };
  auto x = sample(), y = sample();
  law("regroup homomorphism", flat_perm(flatten(regroup(x * y, fibers), fibers)),
      flat_perm(flatten(regroup(x, fibers) * regroup(y, fibers), fibers)));
  law("regroup bijective", flat_perm(flatten(regroup(x, fibers), fibers)), flat_perm(x));

  // Relabel by a cyclic shift with affine conjugations.
  const std::int64_t shift = rng.uniform(1, 7);
  const Padic u = random_padic(ctx, rng, 0, 0, 2, false);
  std::map<Ball, Ball> pi, pinv;
  std::map<Ball, AffineIsometry> psi;
  for (std::size_t j = 0; j < 8; ++j) {
    const Ball& src = balls[(j + static_cast<std::size_t>(shift)) % 8];
    pi[balls[j]] = src;
    pinv[src] = balls[j];
    psi[balls[j]] = AffineIsometry{src, balls[j], u};
  }
  std::function<DiffeoWord(const Ball&, const DiffeoWord&)> beta = [&](const Ball& j, const DiffeoWord& w) {
    return conjugate_affine(w, psi.at(j));
  };
  std::function<DiffeoWord(const Ball&, const DiffeoWord&)> beta_inv = [&](const Ball& i0, const DiffeoWord& w) {
    return conjugate_affine(w, psi.at(pinv.at(i0)).inverse());
  };
  law("relabel homomorphism", perm(relabel(a * b, pi, beta), ctx, L),
      perm(relabel(a, pi, beta) * relabel(b, pi, beta), ctx, L));
  law("relabel bijective", perm(relabel(relabel(a, pi, beta), pinv, beta_inv), ctx, L), pa);
}

void conjugate(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  const auto balls = eight_balls(p);
  const int L = balls.front().level() + cfg.m;
  // gamma: a random permutation of the balls with unit scalings and inner twists.
  std::vector<std::size_t> order(8);
  for (std::size_t j = 0; j < 8; ++j) order[j] = j;
  for (std::size_t j = 7; j > 0; --j) std::swap(order[j], order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(j)))]);
  std::vector<GlobalPiece> pieces;
  for (std::size_t j = 0; j < 8; ++j) {
    const Padic u = random_padic(ctx, rng, 0, 0, 2, false);
    DiffeoWord inner = rng.coin() ? DiffeoWord(random_diffeo(ctx, balls[j], rng, 2, 1, 1)) : DiffeoWord(balls[j]);
    pieces.push_back({AffineIsometry{balls[j], balls[order[j]], u}, inner});
  }
  auto gamma = GlobalDiffeo::make(ctx, pieces);
  const Region R = union_of(std::set<Ball>(balls.begin(), balls.end()));
  const Permutation gp = region_permutation(R, L, [&](std::span<const Padic> z) { return gamma.eval(z, L); }, ctx);
  const Permutation gi =
      region_permutation(R, L, [&](std::span<const Padic> z) { return gamma.eval_inverse(z, L); }, ctx);
  auto eta = random_product(ctx, balls, rng, 2), eta2 = random_product(ctx, balls, rng, 2);
  auto conj = conjugate_global(gamma, eta);
  bool closed = true;
  for (const auto& [b, w] : conj.entries()) closed = closed && w.ball() == b;
  ck.check(closed, [&] { return Json{{"law", "entries live on their balls"}}; });
  auto law = [&](const char* name, const Permutation& lhs, const Permutation& rhs) {
    ck.check(lhs == rhs, [&] { return Json{{"law", name}, {"level", L}, {"lhs", lhs}, {"rhs", rhs}}; });
  };
  law("conjugation", perm(conj, ctx, L), compose_permutations(gp, compose_permutations(perm(eta, ctx, L), gi)));
  law("homomorphism", perm(conjugate_global(gamma, eta * eta2), ctx, L),
      perm(conj * conjugate_global(gamma, eta2), ctx, L));
}

// ---- algebra --------------------------------------------------------------

void cia_tensor(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  // F = Q_p[x]/(x^2 - p), irreducible by Eisenstein.
  const auto F = quotient_algebra(ctx, {Padic::from_integer(ctx, -p), Padic(ctx)});
  const auto A = i % 2 ? matrix_algebra(ctx, 2) : scalar_algebra(ctx);
  const auto T = tensor(F, A);
  std::vector<PadicVector> z(2);
  for (auto& zi : z)
    for (int r = 0; r < A.dim(); ++r) zi.push_back(random_padic(ctx, rng, 1, 3, 3));
  auto inputs = [&] { return Json{{"A_dim", A.dim()}, {"z0", to_json(z[0])}, {"z1", to_json(z[1])}}; };
  const auto v = tensor_right_inverse(F, A, z);
  const auto a = one_plus_phi(F, A, z), b = one_plus_phi(F, A, v);
  ck.compare(compare(T.mul(a, b), T.one()), inputs);
  ck.compare(compare(T.mul(b, a), T.one()), inputs);
  ck.compare(compare(alg_inverse(T, a), b), inputs);
}

void cia_iota(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  const auto M2 = matrix_algebra(ctx, 2);
  PadicVector x, v;
  for (int r = 0; r < 4; ++r) x.push_back(random_padic(ctx, rng, 0, 2, 3));
  // Keep x invertible: add a unit multiple of the identity.
  const Padic shift = Padic::from_integer(ctx, rng.uniform(1, p - 1));
  x[0] = x[0] * Padic::from_integer(ctx, p) + shift;
  x[3] = x[3] * Padic::from_integer(ctx, p) + shift;
  for (int r = 0; r < 4; ++r) v.push_back(random_padic(ctx, rng, 0, 2, 3));
  const Padic t = random_padic(ctx, rng, 1, 2, 2, false);
  auto inputs = [&] { return Json{{"x", to_json(x)}, {"v", to_json(v)}, {"t", to_json(t)}}; };
  ck.compare(check_inversion_derivative(M2, x, v, t), inputs);
  ck.compare(check_inversion_derivative(M2, x, v, Padic(ctx)), inputs);
}

void oplus(const SuiteConfig& cfg, Rng& rng, int i, Checks& ck) {
  const int p = prime_for(cfg, i), d = dim_for(cfg, i);
  PadicContext ctx(p, cfg.N);
  const Region dom(Ball::unit(p, d));
  std::map<int, FunctionModel> fs;
  for (int k = 0; k < 6; ++k) {
    Poly q = random_poly(ctx, d, cfg.deg, rng);
    q = q - q.coefficient(Exponents(static_cast<std::size_t>(d), 0));
    fs.emplace(k, FunctionModel::uniform(ctx, dom, {q}));
  }
  // One exceptional index whose map does not vanish at zero.
  const int ex = static_cast<int>(rng.uniform(0, 5));
  fs.at(ex) = FunctionModel::uniform(ctx, dom, {random_poly(ctx, d, cfg.deg, rng) + Padic::from_integer(ctx, 1)});
  SparseTuple<int> x;
  for (int k = 0; k < 6; ++k)
    if (rng.coin()) x.emplace(k, random_point(ctx, Ball::unit(p, d), rng, 2));
  const auto y = oplus_apply(fs, {ex}, x);
  bool support_ok = true, proj_ok = true;
  for (const auto& [k, val] : y) support_ok = support_ok && (x.count(k) || k == ex);
  for (int k = 0; k < 6; ++k) {
    const PadicVector arg = x.count(k) ? x.at(k) : zero_vector(ctx, static_cast<std::size_t>(d));
    const PadicVector direct = fs.at(k).eval(arg);
    const PadicVector got = y.count(k) ? y.at(k) : zero_vector(ctx, 1);
    proj_ok = proj_ok && equal_at_precision(direct, got);
  }
  auto inputs = [&] {
    Json xs = Json::object();
    for (const auto& [k, val] : x) xs[std::to_string(k)] = to_json(val);
    return Json{{"x", xs}, {"exceptional", ex}};
  };
  ck.check(support_ok, [&] { return Json{{"inputs", inputs()}, {"property", "finite support"}}; });
  ck.check(proj_ok, [&] { return Json{{"inputs", inputs()}, {"property", "projections"}}; });

  // Parameter form: f_k(x, s) = s * q_k(x) with q_k(0) = 0.
  std::map<int, FunctionModel> gs;
  const Region dom2(Ball::unit(p, d + 1));
  for (int k = 0; k < 4; ++k) {
    Poly q = random_poly(ctx, d, cfg.deg - 1 > 0 ? cfg.deg - 1 : 1, rng);
    q = q - q.coefficient(Exponents(static_cast<std::size_t>(d), 0));
    std::vector<int> slots(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) slots[s] = s;
    gs.emplace(k, FunctionModel::uniform(ctx, dom2, {q.embed(d + 1, slots) * Poly::variable(ctx, d + 1, d)}));
  }
  SparseTuple<int> xp;
  xp.emplace(static_cast<int>(rng.uniform(0, 3)), random_point(ctx, Ball::unit(p, d), rng, 2));
  const PadicVector param{random_padic(ctx, rng, 0, 2, 2)};
  const auto yp = oplus_apply(gs, {}, xp, param);
  bool param_ok = true;
  for (const auto& [k, val] : yp) param_ok = param_ok && xp.count(k);
  for (const auto& [k, val] : xp) {
    PadicVector arg = val;
    arg.push_back(param[0]);
    const PadicVector direct = gs.at(k).eval(arg);
    const PadicVector got = yp.count(k) ? yp.at(k) : zero_vector(ctx, 1);
    param_ok = param_ok && equal_at_precision(direct, got);
  }
  ck.check(param_ok, [&] { return Json{{"inputs", inputs()}, {"property", "parameter form"}}; });
}

using SuiteFn = void (*)(const SuiteConfig&, Rng&, int, Checks&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"chain-rule", chain_rule},   {"scaling", scaling},
      {"bilinear", bilinear},       {"eval-deriv", eval_deriv},
      {"comp-deriv", comp_deriv},   {"partition", partition},
      {"unity", unity},             {"omega-isometry", omega_isometry},
      {"inversion", inversion},     {"group-axioms", group_axioms},
      {"cia-tensor", cia_tensor},   {"cia-iota", cia_iota},
      {"oplus", oplus},             {"conjugate", conjugate},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, f] : registry()) out.push_back(n);
    return out;
  }();
  return names;
}

Report run_suite(const std::string& name, const SuiteConfig& cfg) {
  SuiteFn fn = nullptr;
  for (const auto& [n, f] : registry())
    if (n == name) fn = f;
  if (!fn) fail(ErrorKind::UnknownSuite, "no suite named \"" + name + "\"");
  cfg.validate();
  Report report;
  report.suite = name;
  report.config = cfg;
  Checks ck(report);
  const auto start = std::chrono::steady_clock::now();
  Rng root(cfg.seed);
  for (int i = 0; i < cfg.samples; ++i) {
    Rng rng = root.split();
    ck.sample(i);
    try {
      fn(cfg, rng, i, ck);
    } catch (const Error& e) {
      ck.error(e);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ucalc
