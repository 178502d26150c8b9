// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ucalc/poly.hpp"

namespace ucalc {

enum class BoundStatus { Holds, Fails, Undecided };

struct BoundResult {
  BoundStatus status = BoundStatus::Undecided;
  // For Fails: a point z of O^n with v(Q_i(z)) < target for some i.
  std::vector<std::int64_t> witness;
  // Depth of the deepest cell that was needed (0 means the coefficient bound sufficed).
  int depth = 0;
  std::size_t cells = 0;
};

// Decides whether v(Q_i(z)) >= target for every z in O^n and every
// component Q_i. A cell r + p^j O^n is settled when every coefficient of
// Q_i(r + p^j u) reaches the target, and refuted when the constant term
// Q_i(r) does not; otherwise it splits into p^n children, down to max_depth.
BoundResult check_valuation_bound(const std::vector<Poly>& Q, Valuation target, int max_depth);

}  // namespace ucalc
