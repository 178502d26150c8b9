// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "ucalc/bounds.hpp"
#include "ucalc/model.hpp"

namespace ucalc {

// A point (x, y, t) of U^[1].
struct DQPoint {
  PadicVector x;
  PadicVector y;
  Padic t;
};

// Argument orderings for the iterated difference quotient of order k.
//  Nested: f^[k] on (a, b, t) with a, b flat points of order k-1.
//  Braced: f^{k} on (x_1..x_{2^k}, s_1..s_{2^k-1}), vectors first; one step
//          of the recursion reads (x, y, u, v, t) and forwards ((x,u), (y,v), t).
enum class Layout { Nested, Braced };

// Number of scalar coordinates of a flat order-k point for dimension d.
std::size_t flat_size(int d, int k);

// Whether a flat order-k point lies in U^[k] (Nested) or U^{k} (Braced).
bool in_domain(const Region& U, std::span<const Padic> flat, int k, Layout layout);

// Iterated difference quotient of order k at a flat point. Parameters that
// vanish are handled by formal expansion, giving the continuous extension.
PadicVector difference_quotient(const FunctionModel& f, std::span<const Padic> flat, int k, Layout layout);

PadicVector dq1(const FunctionModel& f, const DQPoint& pt);
PadicVector dqk(const FunctionModel& f, std::span<const Padic> nested, int k);
PadicVector braced_eval(const FunctionModel& f, std::span<const Padic> braced, int k);

// perm[i] is the position in the nested layout of braced coordinate i,
// generated by unrolling the recursive definition of the braced order.
std::vector<std::size_t> braced_to_nested(int d, int k);

// Assembles a braced flat point from 2^k vectors and 2^k - 1 scalars.
PadicVector braced_point(std::span<const PadicVector> xs, std::span<const Padic> scalars);

// (D_{v_j} ... D_{v_1} f)(x) by formal differentiation.
PadicVector directional(const FunctionModel& f, std::span<const Padic> x, std::span<const PadicVector> dirs);

// Exponents of the scaling symmetry of f^{k}: i for the 2^k vectors, j for
// the 2^k - 1 scalars, and ell = 2^k - 1.
struct ScalingExponents {
  std::vector<int> i;
  std::vector<int> j;
  int ell = 0;
};
ScalingExponents scaling_exponents(int k);

struct Comparison {
  PadicVector lhs;
  PadicVector rhs;
  bool equal = false;
};

Comparison compare(PadicVector lhs, PadicVector rhs);

// f^{k}(x, t s) against t^-ell f^{k}(t^i x, t^-j s). MembershipFailure when
// either argument leaves U^{k}.
Comparison check_scaling(const FunctionModel& f, int k, std::span<const PadicVector> xs,
                         std::span<const Padic> scalars, const Padic& t);

// Image check f(C) inside D for a piece C of f: Holds, Fails or Undecided.
BoundResult image_check(const Piece& piece, const Ball& target, int max_depth);

// Maps each piece ball of f to a piece ball of g.
using CompositionCertificate = std::map<Ball, Ball>;

// g o f on f's partition; every entry of the certificate is verified.
FunctionModel compose(const FunctionModel& g, const FunctionModel& f, const CompositionCertificate& cert,
                      int max_depth = 3);

// Builds a certificate, refining f's partition until each piece maps into
// a piece of g. CompositionUncertified when refinement does not settle.
CompositionCertificate find_certificate(const FunctionModel& g, const FunctionModel& f, FunctionModel& refined_f,
                                        int max_refine = 4, int max_depth = 3);
FunctionModel compose(const FunctionModel& g, const FunctionModel& f);

Comparison check_chain_rule(const FunctionModel& f, const FunctionModel& g, const DQPoint& pt);

Comparison check_eval_derivative(const FunctionModel& gamma, const FunctionModel& eta, const DQPoint& pt);

struct CompositionDerivativeReport {
  Comparison at_t;     // the identity at the given nonzero t
  Comparison at_zero;  // its t = 0 form against directional derivatives
};

CompositionDerivativeReport check_composition_derivative(const FunctionModel& gamma, const FunctionModel& eta,
                                                         const FunctionModel& gamma1, const FunctionModel& eta1,
                                                         const Padic& t, std::span<const Padic> x);

// f on U x V (first du coordinates in U) frozen at x in U, as a model on V.
FunctionModel curry(const FunctionModel& f, int du, std::span<const Padic> x);

}  // namespace ucalc
