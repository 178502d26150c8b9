// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ucalc/model.hpp"

namespace ucalc {

// Smallest valuation v with p^-v < 1/2.
int omega_threshold(int p);

// gamma = id + sigma on a ball B, with gamma(B) inside B verified.
class BallEndo {
 public:
  BallEndo() = default;
  // sigma must be defined exactly on B with values in Q_p^d. NotContained
  // when the range check fails or stays undecided at depth max_depth.
  static BallEndo make(const Ball& ball, FunctionModel sigma, int max_depth = 3);
  static BallEndo identity(const PadicContext& ctx, const Ball& ball);

  const PadicContext& context() const noexcept { return sigma_.context(); }
  const Ball& ball() const noexcept { return ball_; }
  int dim() const noexcept { return ball_.dim(); }
  const FunctionModel& sigma() const noexcept { return sigma_; }
  FunctionModel gamma() const;
  PadicVector eval(std::span<const Padic> x) const;

 private:
  Ball ball_;
  FunctionModel sigma_;
};

enum class OmegaMethod { CoefficientBound, Exhaustive };

struct OmegaCertificate {
  int v_min = 1;
  OmegaMethod method = OmegaMethod::CoefficientBound;
  int level = 0;
};

// Where the Omega condition breaks. For "range" only x is meaningful and
// value is sigma(x); otherwise value is sigma^[1](x, y, t).
struct OmegaWitness {
  std::string condition;
  PadicVector x;
  PadicVector y;
  Padic t;
  Valuation valuation = 0;
  Valuation required = 0;
};

struct OmegaOutcome {
  bool certified = false;
  OmegaCertificate certificate;
  std::optional<OmegaWitness> witness;
  std::string reason;
};

OmegaOutcome try_certify_omega(const BallEndo& endo, int level);
// NotCertified (with the witness in the message) when the outcome is negative.
OmegaCertificate certify_omega(const BallEndo& endo, int level);

class CertifiedDiffeo {
 public:
  CertifiedDiffeo() = default;
  CertifiedDiffeo(BallEndo endo, OmegaCertificate cert) : endo_(std::move(endo)), cert_(cert) {}
  static CertifiedDiffeo certify(const BallEndo& endo, int level = 3);
  static CertifiedDiffeo identity(const PadicContext& ctx, const Ball& ball);

  const BallEndo& endo() const noexcept { return endo_; }
  const OmegaCertificate& certificate() const noexcept { return cert_; }
  const Ball& ball() const noexcept { return endo_.ball(); }
  const PadicContext& context() const noexcept { return endo_.context(); }
  const FunctionModel& sigma() const noexcept { return endo_.sigma(); }
  int v_min() const noexcept { return cert_.v_min; }
  bool is_identity() const { return endo_.sigma().is_zero(); }
  PadicVector eval(std::span<const Padic> x) const { return endo_.eval(x); }

 private:
  BallEndo endo_;
  OmegaCertificate cert_;
};

struct IsometryReport {
  std::size_t checked = 0;
  std::vector<std::size_t> violations;
};

IsometryReport isometry_check(const CertifiedDiffeo& g,
                              const std::vector<std::pair<PadicVector, PadicVector>>& pairs);

// Fixed-point iteration x <- y - sigma(x) modulo p^target. Returns integral
// coordinates with gamma(x) = y mod p^target.
PadicVector invert_at(const CertifiedDiffeo& g, std::span<const Padic> y, Valuation target,
                      int* iterations = nullptr);
int inversion_budget(Valuation target, int v_min);

// g1 o g2.
CertifiedDiffeo compose_diffeos(const CertifiedDiffeo& g1, const CertifiedDiffeo& g2, int level = 3);

// The ball g^-1(b) for a ball b inside g's ball.
Ball preimage_ball(const CertifiedDiffeo& g, const Ball& b);

// Cosets of p^(k+m) inside a ball of level k, indexed by sum z_i p^(m i)
// for the representative center + p^k z.
std::vector<PadicVector> coset_representatives(const PadicContext& ctx, const Ball& ball, int m);
std::int64_t coset_index(const Ball& ball, int m, std::span<const Padic> x);

using Permutation = std::vector<std::int64_t>;

Permutation induced_level_map(const CertifiedDiffeo& g, int m);
// (a o b)[i] = a[b[i]].
Permutation compose_permutations(const Permutation& a, const Permutation& b);
Permutation invert_permutation(const Permutation& a);
bool is_identity_permutation(const Permutation& a);

// A product of certified diffeos of one ball and their inverses, applied
// right to left. Inverse factors are evaluated by iteration.
class DiffeoWord {
 public:
  struct Factor {
    std::shared_ptr<const CertifiedDiffeo> map;
    bool inverse = false;
  };

  DiffeoWord() = default;
  explicit DiffeoWord(Ball ball) : ball_(std::move(ball)) {}
  explicit DiffeoWord(CertifiedDiffeo g);

  const Ball& ball() const noexcept { return ball_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_identity() const noexcept { return factors_.empty(); }

  // Integral point congruent to the image modulo p^precision.
  PadicVector eval(const PadicContext& ctx, std::span<const Padic> x, Valuation precision) const;
  Permutation induced(const PadicContext& ctx, int m) const;

  DiffeoWord inverse() const;
  // a o b, with cancellation of adjacent inverse pairs and merging of
  // small adjacent forward factors.
  friend DiffeoWord operator*(const DiffeoWord& a, const DiffeoWord& b);

 private:
  void push_back(Factor f);

  Ball ball_;
  std::vector<Factor> factors_;
};

// x -> target_center + u (x - source_center) between balls of one level, u a unit.
struct AffineIsometry {
  Ball source;
  Ball target;
  Padic u;

  PadicVector apply(std::span<const Padic> x) const;
  PadicVector apply_inverse(std::span<const Padic> x) const;
  AffineIsometry inverse() const;
  void validate() const;
};

// psi o g o psi^-1 on psi's target ball.
CertifiedDiffeo conjugate_affine(const CertifiedDiffeo& g, const AffineIsometry& psi, int level = 3);
DiffeoWord conjugate_affine(const DiffeoWord& w, const AffineIsometry& psi, int level = 3);

// id + sigma on a region U with sigma zero outside its support.
class CompactlySupportedEndo {
 public:
  CompactlySupportedEndo() = default;
  // Range certificate: each piece of id + sigma maps into the ball of U
  // that contains it. CertificateInvalid otherwise.
  static CompactlySupportedEndo make(const Region& U, FunctionModel sigma, int max_depth = 3);
  static CompactlySupportedEndo identity(const PadicContext& ctx, const Region& U);

  const Region& region() const noexcept { return U_; }
  const FunctionModel& sigma() const noexcept { return sigma_; }
  const Region& support() const noexcept { return support_; }
  const PadicContext& context() const noexcept { return sigma_.context(); }
  PadicVector eval(std::span<const Padic> x) const;

 private:
  Region U_;
  FunctionModel sigma_;
  Region support_;
};

// Displacement sigma_b + sigma_a o (id + sigma_b) of a o b.
CompactlySupportedEndo endo_compose(const CompactlySupportedEndo& a, const CompactlySupportedEndo& b);

struct MembershipDecision {
  bool accepted = false;
  std::vector<CertifiedDiffeo> certificates;  // one per ball of the support
  std::optional<Ball> rejected_ball;
  std::optional<OmegaWitness> witness;
  std::string reason;
};

MembershipDecision diffc_membership(const CompactlySupportedEndo& a, int level = 3);

// Residues modulo p^L of the points of a region, in lexicographic order.
std::vector<std::vector<std::int64_t>> region_points(const Region& U, int L);
std::vector<std::int64_t> residues(std::span<const Padic> x, int p, int L);

}  // namespace ucalc
