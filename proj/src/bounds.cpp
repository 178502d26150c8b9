// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ucalc/bounds.hpp"

#include <algorithm>

#include "ucalc/balls.hpp"

namespace ucalc {

namespace {

struct Search {
  Valuation target;
  int max_depth;
  int p;
  int n;
  PadicContext ctx;
  BoundResult result;
  bool undecided = false;

  // Returns false once a witness is found.
  bool visit(std::vector<Poly> cell, const std::vector<std::int64_t>& r, int j) {
    ++result.cells;
    result.depth = std::max(result.depth, j);
    std::vector<Poly> open;
    for (auto& q : cell) {
      if (q.min_coefficient_valuation() >= target) continue;
      if (q.coefficient(Exponents(n, 0)).valuation() < target) {
        result.status = BoundStatus::Fails;
        result.witness = r;
        return false;
      }
      open.push_back(std::move(q));
    }
    if (open.empty()) return true;
    if (j >= max_depth) {
      undecided = true;
      return true;
    }
    const std::int64_t step = ipow(p, j);
    for (const auto& a : level_points(p, n, 1)) {
      PadicVector shift_by = integer_vector(ctx, a);
      std::vector<Poly> child;
      child.reserve(open.size());
      for (const auto& q : open) child.push_back(shift(q, shift_by, Padic::from_integer(ctx, p)));
      std::vector<std::int64_t> rc = r;
      for (int i = 0; i < n; ++i) rc[i] += a[i] * step;
      if (!visit(std::move(child), rc, j + 1)) return false;
    }
    return true;
  }
};

}  // namespace

BoundResult check_valuation_bound(const std::vector<Poly>& Q, Valuation target, int max_depth) {
  BoundResult empty;
  empty.status = BoundStatus::Holds;
  if (Q.empty()) return empty;
  Search s{target, max_depth, Q.front().context().prime(), Q.front().nvars(), Q.front().context(), {}, false};
  for (const auto& q : Q) {
    if (q.nvars() != s.n) fail(ErrorKind::InvalidArgument, "bound check over mixed arities");
    if (!s.ctx.is_set() && q.context().is_set()) {
      s.ctx = q.context();
      s.p = s.ctx.prime();
    }
  }
  if (!s.ctx.is_set()) return empty;
  if (s.visit(Q, std::vector<std::int64_t>(s.n, 0), 0))
    s.result.status = s.undecided ? BoundStatus::Undecided : BoundStatus::Holds;
  return s.result;
}

}  // namespace ucalc
