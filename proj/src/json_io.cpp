// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/json_io.hpp"

#include <fstream>
#include <map>
#include <set>

namespace ucalc {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::ParseError, "at " + path + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

mpz_class as_bigint(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  if (!j.is_string()) parse_fail(path, "expected an integer or a decimal string");
  mpz_class out;
  if (out.set_str(j.get<std::string>(), 10) != 0) parse_fail(path, "not a decimal integer");
  return out;
}

// Integers in the JSON number range stay numbers.
Json bigint_json(const mpz_class& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

Json compact_exact(const Padic& x) {
  if (x.is_zero()) return 0;
  mpz_class num = x.numerator(), den = x.denominator();
  if (x.valuation() >= 0)
    num *= x.context().power(x.valuation());
  else
    den *= x.context().power(-x.valuation());
  if (den == 1) return bigint_json(num);
  return num.get_str() + "/" + den.get_str();
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  return j;
}

}  // namespace

Json to_json(const Padic& x, ScalarStyle style) {
  if (style == ScalarStyle::Compact && x.is_exact()) return compact_exact(x);
  Json out;
  out["p"] = x.is_zero() && !x.context().is_set() ? 0 : x.context().prime();
  if (x.is_zero()) {
    out["v"] = "inf";
    out["digits"] = Json::array();
    return out;
  }
  out["v"] = x.valuation();
  out["digits"] = x.digits();
  if (x.is_exact()) {
    out["num"] = x.numerator().get_str();
    out["den"] = x.denominator().get_str();
  }
  return out;
}

Json to_json(std::span<const Padic> x, ScalarStyle style) {
  Json out = Json::array();
  for (const auto& c : x) out.push_back(to_json(c, style));
  return out;
}

Json to_json(const Ball& b, const PadicContext& ctx, ScalarStyle style) {
  return Json{{"center", to_json(b.center_vector(ctx), style)}, {"k", b.level()}};
}

Json to_json(const Region& r, const PadicContext& ctx, ScalarStyle style) {
  Json balls = Json::array();
  for (const auto& b : r.balls()) balls.push_back(to_json(b, ctx, style));
  Json out{{"balls", balls}};
  if (r.empty()) out["d"] = r.dim();
  return out;
}

Json to_json(const FunctionModel& f, ScalarStyle style) {
  Json pieces = Json::array();
  for (const auto& pc : f.pieces()) {
    std::set<Exponents> exps;
    for (const auto& q : pc.components)
      for (const auto& [e, c] : q.terms()) exps.insert(e);
    Json terms = Json::array();
    for (const auto& e : exps) {
      PadicVector coef;
      for (const auto& q : pc.components) coef.push_back(q.coefficient(e));
      terms.push_back(Json{{"exps", e}, {"coef", to_json(coef, style)}});
    }
    pieces.push_back(Json{{"ball", to_json(pc.ball, f.context(), style)}, {"poly", terms}});
  }
  return Json{{"domain", to_json(f.domain(), f.context(), style)}, {"codim", f.codim()}, {"pieces", pieces}};
}

Json to_json(const StructAlgebra& A, ScalarStyle style) {
  const int n = A.dim();
  Json t = Json::array();
  for (int i = 0; i < n; ++i) {
    Json ti = Json::array();
    for (int j = 0; j < n; ++j) {
      Json tij = Json::array();
      for (int k = 0; k < n; ++k) tij.push_back(to_json(A.t(i, j, k), style));
      ti.push_back(tij);
    }
    t.push_back(ti);
  }
  return Json{{"n", n}, {"t", t}, {"one", to_json(A.one(), style)}};
}

Json to_json(const BallEndo& g, ScalarStyle style) {
  return Json{{"ball", to_json(g.ball(), g.context(), style)}, {"sigma", to_json(g.sigma(), style)}};
}

Padic parse_scalar(const Json& j, const PadicContext& ctx, const std::string& path) {
  try {
    if (j.is_number_integer() || j.is_string()) {
      if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
          mpz_class num, den;
          if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            parse_fail(path, "malformed rational \"" + s + "\"");
          if (den == 0) parse_fail(path, "zero denominator");
          return Padic::from_rational(ctx, num, den);
        }
      }
      return Padic::from_integer(ctx, as_bigint(j, path));
    }
    if (!j.is_object()) parse_fail(path, "expected a scalar");
    const std::int64_t p = as_int(member(j, "p", path), path + ".p");
    const Json& v = member(j, "v", path);
    const Json& digits = array_at(member(j, "digits", path), path + ".digits");
    if (v.is_string()) {
      if (v.get<std::string>() != "inf") parse_fail(path + ".v", "expected an integer or \"inf\"");
      if (!digits.empty()) parse_fail(path + ".digits", "exact zero has no digits");
      return Padic(ctx);
    }
    if (p != ctx.prime()) parse_fail(path + ".p", "prime " + std::to_string(p) + " does not match the context");
    const Valuation val = as_int(v, path + ".v");
    std::vector<int> ds;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      const std::string dp = path + ".digits[" + std::to_string(i) + "]";
      const std::int64_t d = as_int(digits[i], dp);
      if (d < 0 || d >= p) parse_fail(dp, "digit out of range");
      ds.push_back(static_cast<int>(d));
    }
    if (ds.empty()) parse_fail(path + ".digits", "nonzero value without digits");
    if (ds[0] == 0) parse_fail(path + ".digits[0]", "leading digit must be nonzero");
    if (j.contains("num")) {
      const mpz_class num = as_bigint(member(j, "num", path), path + ".num");
      const mpz_class den = j.contains("den") ? as_bigint(j.at("den"), path + ".den") : mpz_class(1);
      if (den <= 0) parse_fail(path + ".den", "denominator must be positive");
      if (num % p == 0 || den % p == 0) parse_fail(path + ".num", "unit part must be prime to p");
      Padic x = Padic::power_of_p(ctx, val) * Padic::from_rational(ctx, num, den);
      if (x.digits() != ds) parse_fail(path + ".digits", "digits disagree with num/den");
      return x;
    }
    if (ds.size() > static_cast<std::size_t>(ctx.precision()))
      parse_fail(path + ".digits", "more digits than the precision N = " + std::to_string(ctx.precision()));
    mpz_class u = 0;
    for (std::size_t i = ds.size(); i-- > 0;) u = u * p + ds[i];
    return Padic::approximate(ctx, val, u, static_cast<int>(ds.size()));
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path, e.what());
  }
}

PadicVector parse_vector(const Json& j, const PadicContext& ctx, const std::string& path) {
  PadicVector out;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i)
    out.push_back(parse_scalar(j[i], ctx, path + "[" + std::to_string(i) + "]"));
  return out;
}

Ball parse_ball(const Json& j, const PadicContext& ctx, const std::string& path) {
  const std::int64_t k = as_int(member(j, "k", path), path + ".k");
  if (k < 0) parse_fail(path + ".k", "level must be >= 0");
  const PadicVector c = parse_vector(member(j, "center", path), ctx, path + ".center");
  if (c.empty()) parse_fail(path + ".center", "empty center");
  std::vector<std::int64_t> center;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::string cp = path + ".center[" + std::to_string(i) + "]";
    if (!c[i].is_zero() && c[i].valuation() < 0) parse_fail(cp, "center is not integral");
    mpz_class r;
    try {
      r = c[i].residue(k);
    } catch (const Error& e) {
      parse_fail(cp, e.what());
    }
    if (!r.fits_slong_p()) parse_fail(cp, "center does not fit a machine integer");
    center.push_back(r.get_si());
  }
  try {
    return Ball(ctx.prime(), center, static_cast<int>(k));
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
}

Region parse_region(const Json& j, const PadicContext& ctx, const std::string& path) {
  const Json& balls = array_at(member(j, "balls", path), path + ".balls");
  std::vector<Ball> out;
  for (std::size_t i = 0; i < balls.size(); ++i)
    out.push_back(parse_ball(balls[i], ctx, path + ".balls[" + std::to_string(i) + "]"));
  int d = j.contains("d") ? static_cast<int>(as_int(j.at("d"), path + ".d")) : 1;
  if (!out.empty()) d = out.front().dim();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].dim() != d) parse_fail(path + ".balls[" + std::to_string(i) + "]", "dimension mismatch");
  return Region(ctx.prime(), d, out);
}

FunctionModel parse_model(const Json& j, const PadicContext& ctx, const std::string& path) {
  const Json& pieces = array_at(member(j, "pieces", path), path + ".pieces");
  const int e = j.contains("codim") ? static_cast<int>(as_int(j.at("codim"), path + ".codim")) : 1;
  if (e < 1) parse_fail(path + ".codim", "codim must be positive");
  std::vector<Piece> out;
  int d = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
    Piece pc;
    pc.ball = parse_ball(member(pieces[i], "ball", pp), ctx, pp + ".ball");
    if (d == 0) d = pc.ball.dim();
    if (pc.ball.dim() != d) parse_fail(pp + ".ball", "dimension mismatch");
    pc.components.assign(static_cast<std::size_t>(e), Poly(ctx, d));
    const Json& terms = array_at(member(pieces[i], "poly", pp), pp + ".poly");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = pp + ".poly[" + std::to_string(t) + "]";
      const Json& ex = array_at(member(terms[t], "exps", tp), tp + ".exps");
      Exponents exps;
      for (std::size_t a = 0; a < ex.size(); ++a) {
        const std::int64_t x = as_int(ex[a], tp + ".exps[" + std::to_string(a) + "]");
        if (x < 0) parse_fail(tp + ".exps[" + std::to_string(a) + "]", "negative exponent");
        exps.push_back(static_cast<int>(x));
      }
      if (static_cast<int>(exps.size()) != d) parse_fail(tp + ".exps", "expected " + std::to_string(d) + " exponents");
      const PadicVector coef = parse_vector(member(terms[t], "coef", tp), ctx, tp + ".coef");
      if (static_cast<int>(coef.size()) != e) parse_fail(tp + ".coef", "expected " + std::to_string(e) + " coefficients");
      for (int c = 0; c < e; ++c)
        if (!coef[c].is_zero()) pc.components[c].add_term(exps, coef[c]);
    }
    out.push_back(std::move(pc));
  }
  if (out.empty()) parse_fail(path + ".pieces", "a model needs at least one piece");
  try {
    FunctionModel f(ctx, d, e, out);
    if (j.contains("domain") && !(parse_region(j.at("domain"), ctx, path + ".domain") == f.domain()))
      parse_fail(path + ".domain", "domain is not the union of the piece balls");
    return f;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::ParseError) throw;
    parse_fail(path, err.what());
  }
}

StructAlgebra parse_algebra(const Json& j, const PadicContext& ctx, const std::string& path) {
  const std::int64_t n = as_int(member(j, "n", path), path + ".n");
  if (n < 1) parse_fail(path + ".n", "dimension must be positive");
  const Json& t = array_at(member(j, "t", path), path + ".t");
  std::vector<Padic> consts;
  if (t.size() != static_cast<std::size_t>(n)) parse_fail(path + ".t", "expected n rows");
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string ip = path + ".t[" + std::to_string(i) + "]";
    if (array_at(t[i], ip).size() != static_cast<std::size_t>(n)) parse_fail(ip, "expected n entries");
    for (std::int64_t k = 0; k < n; ++k) {
      const std::string jp = ip + "[" + std::to_string(k) + "]";
      PadicVector row = parse_vector(t[i][k], ctx, jp);
      if (row.size() != static_cast<std::size_t>(n)) parse_fail(jp, "expected n constants");
      consts.insert(consts.end(), row.begin(), row.end());
    }
  }
  PadicVector one = parse_vector(member(j, "one", path), ctx, path + ".one");
  try {
    return StructAlgebra(ctx, static_cast<int>(n), std::move(consts), std::move(one));
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
}

BallEndo parse_endo(const Json& j, const PadicContext& ctx, const std::string& path) {
  const Ball ball = parse_ball(member(j, "ball", path), ctx, path + ".ball");
  Json sigma = member(j, "sigma", path);
  if (sigma.is_object() && !sigma.contains("codim")) sigma["codim"] = ball.dim();
  FunctionModel s = parse_model(sigma, ctx, path + ".sigma");
  try {
    return BallEndo::make(ball, std::move(s));
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
}

const char* to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Scalar: return "scalar";
    case DocumentKind::Vector: return "vector";
    case DocumentKind::Ball: return "ball";
    case DocumentKind::Region: return "region";
    case DocumentKind::Model: return "model";
    case DocumentKind::Algebra: return "algebra";
    case DocumentKind::Endo: return "endo";
  }
  return "?";
}

DocumentKind parse_kind(const std::string& name) {
  for (auto k : {DocumentKind::Scalar, DocumentKind::Vector, DocumentKind::Ball, DocumentKind::Region,
                 DocumentKind::Model, DocumentKind::Algebra, DocumentKind::Endo})
    if (name == to_string(k)) return k;
  fail(ErrorKind::ParseError, "unknown document kind \"" + name + "\"");
}

DocumentKind detect_kind(const Json& j) {
  if (j.is_array()) return DocumentKind::Vector;
  if (!j.is_object()) return DocumentKind::Scalar;
  if (j.contains("sigma")) return DocumentKind::Endo;
  if (j.contains("pieces")) return DocumentKind::Model;
  if (j.contains("t") && j.contains("n")) return DocumentKind::Algebra;
  if (j.contains("balls")) return DocumentKind::Region;
  if (j.contains("center")) return DocumentKind::Ball;
  if (j.contains("digits")) return DocumentKind::Scalar;
  fail(ErrorKind::ParseError, "at $: cannot tell what kind of document this is");
}

Json convert(const Json& j, DocumentKind kind, const PadicContext& ctx, ScalarStyle style) {
  switch (kind) {
    case DocumentKind::Scalar: return to_json(parse_scalar(j, ctx), style);
    case DocumentKind::Vector: return to_json(parse_vector(j, ctx), style);
    case DocumentKind::Ball: return to_json(parse_ball(j, ctx), ctx, style);
    case DocumentKind::Region: return to_json(parse_region(j, ctx), ctx, style);
    case DocumentKind::Model: return to_json(parse_model(j, ctx), style);
    case DocumentKind::Algebra: return to_json(parse_algebra(j, ctx), style);
    case DocumentKind::Endo: return to_json(parse_endo(j, ctx), style);
  }
  fail(ErrorKind::InvalidArgument, "unknown document kind");
}

std::optional<int> find_prime(const Json& j) {
  if (j.is_object()) {
    auto it = j.find("p");
    if (it != j.end() && it->is_number_integer() && it->get<int>() != 0) return it->get<int>();
    for (const auto& [k, v] : j.items())
      if (auto p = find_prime(v)) return p;
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (auto p = find_prime(v)) return p;
  }
  return std::nullopt;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

}  // namespace ucalc
