// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
//
// ucalc <noun> <verb> [flags]. Reports go to stdout as JSON, a one-line
// summary to stderr. Exit status: 0 pass, 1 check failure, 2 usage or
// parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>

#include "ucalc/calculus.hpp"
#include "ucalc/cia.hpp"
#include "ucalc/json_io.hpp"
#include "ucalc/suites.hpp"
#include "ucalc/weakprod.hpp"

using namespace ucalc;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

struct Globals {
  int p = 0;
  int N = 12;
  std::uint64_t seed = 1;
  int level = 3;
  std::string out;
};

// Inline JSON text, or the path of a JSON file.
Json load(const std::string& arg) {
  if (!arg.empty() && std::string("[{\"-0123456789").find(arg.front()) != std::string::npos) {
    try {
      return Json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::ParseError, "argument " + arg + ": " + e.what());
    }
  }
  return read_json_file(arg);
}

PadicContext context_for(const Globals& g, std::initializer_list<const Json*> docs) {
  int p = g.p;
  if (p == 0)
    for (const Json* d : docs)
      if (auto q = find_prime(*d)) {
        p = *q;
        break;
      }
  if (p == 0) p = 3;
  if (!is_prime(p)) fail(ErrorKind::ConfigInvalid, "--p " + std::to_string(p) + " is not prime");
  if (g.N < 1) fail(ErrorKind::ConfigInvalid, "--N must be positive");
  return PadicContext(p, g.N);
}

void emit(const Globals& g, const Json& report) {
  const std::string text = report.dump(2);
  if (g.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(g.out);
    if (!f) fail(ErrorKind::ParseError, "cannot write " + g.out);
    f << text << "\n";
  }
}

Json permutation_json(const Permutation& perm) { return Json(perm); }

// ---- wp bundles -------------------------------------------------------------

struct Bundle {
  PadicContext ctx;
  std::map<std::string, CertifiedDiffeo> diffeos;
  std::set<Ball> index;
  Json doc;
};

Bundle load_bundle(const Globals& g, const std::string& path) {
  Bundle b;
  b.doc = load(path);
  b.ctx = context_for(g, {&b.doc});
  if (!b.doc.is_object()) fail(ErrorKind::ParseError, "at $: expected an object");
  if (b.doc.contains("diffeos")) {
    const Json& ds = b.doc.at("diffeos");
    if (!ds.is_object()) fail(ErrorKind::ParseError, "at $.diffeos: expected an object");
    for (const auto& [id, endo] : ds.items())
      b.diffeos.emplace(id, CertifiedDiffeo::certify(parse_endo(endo, b.ctx, "$.diffeos." + id), g.level));
  }
  if (!b.doc.contains("index")) fail(ErrorKind::ParseError, "at $: missing key \"index\"");
  const Json& idx = b.doc.at("index");
  if (!idx.is_array()) fail(ErrorKind::ParseError, "at $.index: expected an array");
  for (std::size_t i = 0; i < idx.size(); ++i)
    b.index.insert(parse_ball(idx[i], b.ctx, "$.index[" + std::to_string(i) + "]"));
  return b;
}

DiffeoWord parse_word(const Bundle& b, const Ball& ball, const Json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "at " + path + ": expected an array of factors");
  DiffeoWord w(ball);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string fp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("id") || !j[i].at("id").is_string())
      fail(ErrorKind::ParseError, "at " + fp + ": expected {\"id\": ..., \"inverse\": ...}");
    const std::string id = j[i].at("id").get<std::string>();
    auto it = b.diffeos.find(id);
    if (it == b.diffeos.end()) fail(ErrorKind::ParseError, "at " + fp + ".id: unknown diffeo \"" + id + "\"");
    if (!(it->second.ball() == ball))
      fail(ErrorKind::ParseError, "at " + fp + ": diffeo \"" + id + "\" lives on " + it->second.ball().to_string());
    const bool inverse = j[i].value("inverse", false);
    DiffeoWord f(it->second);
    w = w * (inverse ? f.inverse() : f);
  }
  return w;
}

BallProduct parse_element(const Bundle& b, const char* key) {
  const std::string path = std::string("$.") + key;
  if (!b.doc.contains(key)) fail(ErrorKind::ParseError, "at $: missing key \"" + std::string(key) + "\"");
  const Json& j = b.doc.at(key);
  if (!j.is_array()) fail(ErrorKind::ParseError, "at " + path + ": expected an array of entries");
  BallProduct x(b.index);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ep = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("ball") || !j[i].contains("word"))
      fail(ErrorKind::ParseError, "at " + ep + ": expected {\"ball\": ..., \"word\": [...]}");
    const Ball ball = parse_ball(j[i].at("ball"), b.ctx, ep + ".ball");
    if (!b.index.count(ball)) fail(ErrorKind::ParseError, "at " + ep + ".ball: not in the index set");
    x.set(ball, parse_word(b, ball, j[i].at("word"), ep + ".word"));
  }
  return x;
}

Json element_json(const BallProduct& x, const PadicContext& ctx, int m) {
  Json entries = Json::array();
  for (const auto& [ball, w] : x.entries())
    entries.push_back(Json{{"ball", to_json(ball, ctx)}, {"factors", w.factors().size()}, {"induced", w.induced(ctx, m)}});
  return Json{{"support", x.entries().size()}, {"level", m}, {"entries", entries}};
}

// ---- commands ---------------------------------------------------------------

int cmd_suite(const Globals& g, const std::string& name, SuiteConfig cfg) {
  cfg.seed = g.seed;
  cfg.N = g.N;
  cfg.m = g.level;
  if (g.p) cfg.p = g.p;
  Report r = run_suite(name, cfg);
  emit(g, r.to_json());
  std::cerr << r.suite << ": " << r.passed << "/" << r.run << " checks passed in " << r.seconds << " s"
            << (r.ok() ? "" : " (FAILED)") << "\n";
  return r.ok() ? kPass : kCheckFailure;
}

int cmd_convert(const Globals& g, const std::string& in, const std::string& kind, const std::string& to) {
  const Json doc = load(in);
  const PadicContext ctx = context_for(g, {&doc});
  const DocumentKind k = kind.empty() ? detect_kind(doc) : parse_kind(kind);
  ScalarStyle style = ScalarStyle::Digits;
  if (to == "compact")
    style = ScalarStyle::Compact;
  else if (to != "digits")
    fail(ErrorKind::ParseError, "--to must be digits or compact");
  emit(g, convert(doc, k, ctx, style));
  std::cerr << "converted " << to_string(k) << "\n";
  return kPass;
}

int cmd_dq(const Globals& g, const std::string& fn, const std::string& xs, const std::string& ys,
           const std::string& ts) {
  const Json fj = load(fn), xj = load(xs), yj = load(ys), tj = load(ts);
  const PadicContext ctx = context_for(g, {&fj, &xj, &yj, &tj});
  const FunctionModel f = parse_model(fj, ctx);
  DQPoint pt{parse_vector(xj, ctx, "--x"), parse_vector(yj, ctx, "--y"), parse_scalar(tj, ctx, "--t")};
  const PadicVector v = dq1(f, pt);
  emit(g, Json{{"value", to_json(v)}});
  std::cerr << "f^[1](x, y, t) = " << to_string(v) << "\n";
  return kPass;
}

int cmd_partition(const Globals& g, const std::string& region_file, const std::string& cover_file) {
  const Json rj = load(region_file), cj = load(cover_file);
  const PadicContext ctx = context_for(g, {&rj, &cj});
  const Region region = parse_region(rj, ctx, "--region");
  const Json& cover_list = cj.is_object() && cj.contains("cover") ? cj.at("cover") : cj;
  if (!cover_list.is_array()) fail(ErrorKind::ParseError, "at --cover: expected an array of regions");
  std::vector<Region> cover;
  for (std::size_t i = 0; i < cover_list.size(); ++i)
    cover.push_back(parse_region(cover_list[i], ctx, "--cover[" + std::to_string(i) + "]"));
  const auto parts = subordinate_partition(region, cover);
  Json pj = Json::array();
  for (const auto& ab : parts) pj.push_back(Json{{"ball", to_json(ab.ball, ctx)}, {"cover_index", ab.cover_index}});
  // Exhaustive check at the verification level.
  std::int64_t violations = 0, checked = 0;
  const int m = std::max(g.level, region.finest_level());
  for (const auto& z : level_points(ctx.prime(), region.dim(), m)) {
    const PadicVector x = integer_vector(ctx, z);
    int hits = 0;
    for (const auto& ab : parts)
      if (ab.ball.contains(x)) {
        ++hits;
        if (!cover[ab.cover_index].contains(x)) ++violations;
      }
    if (hits != (region.contains(x) ? 1 : 0)) ++violations;
    ++checked;
  }
  emit(g, Json{{"partition", pj}, {"level", m}, {"points_checked", checked}, {"violations", violations}});
  std::cerr << parts.size() << " balls, " << violations << " violations over " << checked << " points\n";
  return violations == 0 ? kPass : kCheckFailure;
}

int cmd_certify(const Globals& g, const std::string& endo_file, int level) {
  const Json ej = load(endo_file);
  const PadicContext ctx = context_for(g, {&ej});
  const BallEndo endo = parse_endo(ej, ctx);
  const OmegaOutcome out = try_certify_omega(endo, level);
  Json r{{"certified", out.certified}, {"v_min", omega_threshold(ctx.prime())}, {"level", level}};
  if (out.certified) {
    r["method"] = out.certificate.method == OmegaMethod::CoefficientBound ? "coefficient-bound" : "exhaustive";
    r["certificate_level"] = out.certificate.level;
  } else {
    r["reason"] = out.reason;
    if (out.witness) {
      const auto& w = *out.witness;
      r["witness"] = Json{{"condition", w.condition}, {"x", to_json(w.x)}, {"y", to_json(w.y)}, {"t", to_json(w.t)},
                          {"valuation", w.valuation}, {"required", w.required}};
    }
  }
  emit(g, r);
  std::cerr << (out.certified ? "certified" : "not certified: " + out.reason) << "\n";
  return out.certified ? kPass : kCheckFailure;
}

int cmd_invert(const Globals& g, const std::string& endo_file, const std::string& ys, int prec) {
  const Json ej = load(endo_file), yj = load(ys);
  const PadicContext ctx = context_for(g, {&ej, &yj});
  const CertifiedDiffeo gamma = CertifiedDiffeo::certify(parse_endo(ej, ctx), g.level);
  const PadicVector y = parse_vector(yj, ctx, "--y");
  int steps = 0;
  const PadicVector x = invert_at(gamma, y, prec, &steps);
  const Valuation residual = difference_valuation(gamma.eval(x), y);
  const bool ok = residual >= prec && steps <= inversion_budget(prec, gamma.v_min());
  emit(g, Json{{"x", to_json(x)},
               {"iterations", steps},
               {"budget", inversion_budget(prec, gamma.v_min())},
               {"residual_valuation", residual == kInfiniteValuation ? Json("inf") : Json(residual)},
               {"precision", prec}});
  std::cerr << "x = " << to_string(x) << " after " << steps << " iterations\n";
  return ok ? kPass : kCheckFailure;
}

int cmd_induced(const Globals& g, const std::string& endo_file, int m) {
  const Json ej = load(endo_file);
  const PadicContext ctx = context_for(g, {&ej});
  const CertifiedDiffeo gamma = CertifiedDiffeo::certify(parse_endo(ej, ctx), g.level);
  const Permutation perm = induced_level_map(gamma, m);
  emit(g, Json{{"m", m}, {"induced", permutation_json(perm)}});
  std::cerr << "induced map on " << perm.size() << " cosets\n";
  return kPass;
}

int cmd_alg_invert(const Globals& g, const std::string& alg_file, const std::string& elt) {
  const Json aj = load(alg_file), ej = load(elt);
  const PadicContext ctx = context_for(g, {&aj, &ej});
  const StructAlgebra A = parse_algebra(aj, ctx);
  const PadicVector a = parse_vector(ej, ctx, "--elt");
  if (static_cast<int>(a.size()) != A.dim()) fail(ErrorKind::ParseError, "at --elt: wrong number of coordinates");
  try {
    const PadicVector inv = alg_inverse(A, a);
    const bool ok = equal_at_precision(A.mul(a, inv), A.one());
    emit(g, Json{{"unit", true}, {"inverse", to_json(inv)}, {"product_is_one", ok}});
    std::cerr << "inverse = " << to_string(inv) << "\n";
    return ok ? kPass : kCheckFailure;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotAUnit) throw;
    emit(g, Json{{"unit", false}, {"reason", e.what()}});
    std::cerr << e.what() << "\n";
    return kCheckFailure;
  }
}

int cmd_wp(const Globals& g, const std::string& verb, const std::string& bundle_file, int m) {
  const Bundle b = load_bundle(g, bundle_file);
  const PadicContext& ctx = b.ctx;
  if (verb == "mul") {
    const BallProduct x = parse_element(b, "x"), y = parse_element(b, "y");
    emit(g, element_json(x * y, ctx, m));
  } else if (verb == "inv") {
    const BallProduct x = parse_element(b, "x");
    emit(g, element_json(x.inverse(), ctx, m));
  } else {
    if (!b.doc.contains("gamma") || !b.doc.at("gamma").is_array())
      fail(ErrorKind::ParseError, "at $: missing array \"gamma\"");
    std::vector<GlobalPiece> pieces;
    const Json& gj = b.doc.at("gamma");
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const std::string pp = "$.gamma[" + std::to_string(i) + "]";
      const Json& pc = gj[i];
      if (!pc.is_object() || !pc.contains("source") || !pc.contains("target"))
        fail(ErrorKind::ParseError, "at " + pp + ": expected {\"source\", \"target\", \"u\", \"inner\"}");
      const Ball src = parse_ball(pc.at("source"), ctx, pp + ".source");
      const Ball dst = parse_ball(pc.at("target"), ctx, pp + ".target");
      const Padic u = pc.contains("u") ? parse_scalar(pc.at("u"), ctx, pp + ".u") : Padic::from_integer(ctx, 1);
      const DiffeoWord inner = pc.contains("inner") ? parse_word(b, src, pc.at("inner"), pp + ".inner") : DiffeoWord(src);
      pieces.push_back({AffineIsometry{src, dst, u}, inner});
    }
    const GlobalDiffeo gamma = GlobalDiffeo::make(ctx, pieces);
    const BallProduct eta = parse_element(b, "eta");
    emit(g, element_json(conjugate_global(gamma, eta, g.level), ctx, m));
  }
  std::cerr << "wp " << verb << " done\n";
  return kPass;
}

bool is_usage_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::UnknownSuite:
    case ErrorKind::ConfigInvalid:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ContextMismatch:
    case ErrorKind::MalformedIndex:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact p-adic difference-quotient calculus"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--p", g.p, "Prime (default: taken from the input, else 3)");
  app.add_option("--N", g.N, "Relative precision in digits")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed for suites")->capture_default_str();
  app.add_option("--verify-level", g.level, "Verification level m")->capture_default_str();
  app.add_option("-o,--out", g.out, "Write the JSON report to a file instead of stdout");

  std::function<int()> action;

  // suite run NAME / suite list
  auto* suite = app.add_subcommand("suite", "Seeded verification suites");
  suite->require_subcommand(1);
  SuiteConfig cfg;
  std::string suite_name;
  auto add_suite_flags = [&](CLI::App* c) {
    c->add_option("--samples", cfg.samples)->capture_default_str();
    c->add_option("--pairs", cfg.pairs, "Points per sample")->capture_default_str();
    c->add_option("--d", cfg.d, "Largest dimension")->capture_default_str();
    c->add_option("--e", cfg.e, "Output dimension")->capture_default_str();
    c->add_option("--deg", cfg.deg, "Polynomial degree bound")->capture_default_str();
    c->add_option("--k", cfg.k, "Order for the scaling suite (0 cycles)")->capture_default_str();
  };
  auto* run = suite->add_subcommand("run", "Run one suite");
  run->add_option("name", suite_name, "Suite name")->required();
  add_suite_flags(run);
  run->callback([&] { action = [&] { return cmd_suite(g, suite_name, cfg); }; });
  auto* list = suite->add_subcommand("list", "List the registered suites");
  list->callback([&] {
    action = [&] {
      for (const auto& n : suite_names()) std::cout << n << "\n";
      return kPass;
    };
  });
  // verify NAME: shorthand for suite run NAME.
  auto* verify = app.add_subcommand("verify", "Run one suite (same as suite run)");
  verify->add_option("name", suite_name, "Suite name")->required();
  add_suite_flags(verify);
  verify->callback([&] { action = [&] { return cmd_suite(g, suite_name, cfg); }; });

  std::string in_file, kind, to = "digits";
  auto* conv = app.add_subcommand("convert", "Canonicalize a JSON document");
  conv->add_option("input", in_file, "Input file or inline JSON")->required();
  conv->add_option("--kind", kind, "scalar, vector, ball, region, model, algebra or endo (default: detect)");
  conv->add_option("--to", to, "Scalar style: digits or compact")->capture_default_str();
  conv->callback([&] { action = [&] { return cmd_convert(g, in_file, kind, to); }; });

  std::string fn, xs, ys, ts;
  auto* dq = app.add_subcommand("dq", "First difference quotient f^[1](x, y, t)");
  dq->add_option("--fn", fn)->required();
  dq->add_option("--x", xs)->required();
  dq->add_option("--y", ys)->required();
  dq->add_option("--t", ts)->required();
  dq->callback([&] { action = [&] { return cmd_dq(g, fn, xs, ys, ts); }; });

  std::string region_file, cover_file;
  auto* part = app.add_subcommand("partition", "Subordinate ball partition of a region");
  part->add_option("--region", region_file)->required();
  part->add_option("--cover", cover_file)->required();
  part->callback([&] { action = [&] { return cmd_partition(g, region_file, cover_file); }; });

  std::string endo_file;
  int level = 3, prec = 12, m = 2;
  auto* diffeo = app.add_subcommand("diffeo", "Ball diffeomorphisms");
  diffeo->require_subcommand(1);
  auto* cert = diffeo->add_subcommand("certify", "Check the displacement criterion");
  cert->add_option("--endo", endo_file)->required();
  cert->add_option("--level", level)->capture_default_str();
  cert->callback([&] { action = [&] { return cmd_certify(g, endo_file, level); }; });
  auto* invert = diffeo->add_subcommand("invert", "Solve gamma(x) = y");
  invert->add_option("--endo", endo_file)->required();
  invert->add_option("--y", ys)->required();
  invert->add_option("--prec", prec)->capture_default_str();
  invert->callback([&] { action = [&] { return cmd_invert(g, endo_file, ys, prec); }; });
  auto* induced = diffeo->add_subcommand("induced", "Induced permutation of level-m cosets");
  induced->add_option("--endo", endo_file)->required();
  induced->add_option("--m", m)->capture_default_str();
  induced->callback([&] { action = [&] { return cmd_induced(g, endo_file, m); }; });

  std::string alg_file, elt;
  auto* alg = app.add_subcommand("alg", "Finite-dimensional algebras");
  alg->require_subcommand(1);
  auto* alg_inv = alg->add_subcommand("invert", "Inverse through the regular representation");
  alg_inv->add_option("--alg", alg_file)->required();
  alg_inv->add_option("--elt", elt)->required();
  alg_inv->callback([&] { action = [&] { return cmd_alg_invert(g, alg_file, elt); }; });

  std::string bundle;
  auto* wp = app.add_subcommand("wp", "Weak products of ball diffeomorphisms");
  wp->require_subcommand(1);
  for (const char* verb : {"mul", "inv", "conjugate"}) {
    auto* c = wp->add_subcommand(verb, std::string("Weak product ") + verb);
    c->add_option("--bundle", bundle, "JSON bundle with diffeos, index and elements")->required();
    c->add_option("--m", m, "Level of the reported induced maps")->capture_default_str();
    const std::string v = verb;
    c->callback([&, v] { action = [&, v] { return cmd_wp(g, v, bundle, m); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit(g, Json{{"error", to_string(e.kind())}, {"message", e.what()}});
    return is_usage_error(e.kind()) ? kUsage : kCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
