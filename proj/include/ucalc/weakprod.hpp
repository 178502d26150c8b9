// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <type_traits>
#include <utility>
#include <vector>

#include "ucalc/diffeo.hpp"

namespace ucalc {

// Group operations for entry types. Specializations provide mul, inv and
// is_identity.
template <class G>
struct GroupTraits;

template <>
struct GroupTraits<DiffeoWord> {
  static DiffeoWord mul(const DiffeoWord& a, const DiffeoWord& b) { return a * b; }
  static DiffeoWord inv(const DiffeoWord& a) { return a.inverse(); }
  static bool is_identity(const DiffeoWord& a) { return a.is_identity(); }
};

// Tuples over a finite index set with the identity almost everywhere.
// Identity entries are never stored.
template <class Key, class G>
class WeakProduct {
 public:
  using Traits = GroupTraits<G>;

  WeakProduct() = default;
  explicit WeakProduct(std::set<Key> index) : index_(std::move(index)) {}

  const std::set<Key>& index() const noexcept { return index_; }
  const std::map<Key, G>& entries() const noexcept { return entries_; }
  bool is_identity() const noexcept { return entries_.empty(); }
  const G* find(const Key& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void set(const Key& k, G g) {
    if (!index_.count(k)) fail(ErrorKind::MalformedIndex, "entry outside the index set");
    if constexpr (std::is_same_v<Key, Ball> && std::is_same_v<G, DiffeoWord>) {
      if (!(g.ball() == k)) fail(ErrorKind::MalformedIndex, "entry lives on " + g.ball().to_string());
    }
    if (Traits::is_identity(g))
      entries_.erase(k);
    else
      entries_.insert_or_assign(k, std::move(g));
  }

  WeakProduct inverse() const {
    WeakProduct out(index_);
    for (const auto& [k, g] : entries_) out.set(k, Traits::inv(g));
    return out;
  }

  friend WeakProduct operator*(const WeakProduct& a, const WeakProduct& b) {
    if (a.index_ != b.index_) fail(ErrorKind::MalformedIndex, "factors over different index sets");
    WeakProduct out = a;
    for (const auto& [k, g] : b.entries_) {
      const G* left = a.find(k);
      out.set(k, left ? Traits::mul(*left, g) : g);
    }
    return out;
  }

 private:
  std::set<Key> index_;
  std::map<Key, G> entries_;
};

template <class Key, class G>
struct GroupTraits<WeakProduct<Key, G>> {
  static WeakProduct<Key, G> mul(const WeakProduct<Key, G>& a, const WeakProduct<Key, G>& b) { return a * b; }
  static WeakProduct<Key, G> inv(const WeakProduct<Key, G>& a) { return a.inverse(); }
  static bool is_identity(const WeakProduct<Key, G>& a) { return a.is_identity(); }
};

// Element over K = {(i, j) : j in fibers[i]} as an element over I whose
// entries are finite products over the fibers.
template <class I, class J, class G>
WeakProduct<I, WeakProduct<J, G>> regroup(const WeakProduct<std::pair<I, J>, G>& x,
                                          const std::map<I, std::vector<J>>& fibers) {
  std::set<std::pair<I, J>> expected;
  std::set<I> top;
  for (const auto& [i, js] : fibers) {
    top.insert(i);
    for (const auto& j : js)
      if (!expected.emplace(i, j).second) fail(ErrorKind::MalformedIndex, "repeated fiber element");
  }
  if (expected != x.index()) fail(ErrorKind::MalformedIndex, "index set is not the union of the fibers");
  WeakProduct<I, WeakProduct<J, G>> out(top);
  for (const auto& [i, js] : fibers) {
    WeakProduct<J, G> fiber(std::set<J>(js.begin(), js.end()));
    for (const auto& j : js)
      if (const G* g = x.find({i, j})) fiber.set(j, *g);
    out.set(i, std::move(fiber));
  }
  return out;
}

template <class I, class J, class G>
WeakProduct<std::pair<I, J>, G> flatten(const WeakProduct<I, WeakProduct<J, G>>& x,
                                        const std::map<I, std::vector<J>>& fibers) {
  std::set<std::pair<I, J>> index;
  std::set<I> top;
  for (const auto& [i, js] : fibers) {
    top.insert(i);
    for (const auto& j : js) index.emplace(i, j);
  }
  if (top != x.index()) fail(ErrorKind::MalformedIndex, "fibers do not match the index set");
  WeakProduct<std::pair<I, J>, G> out(index);
  for (const auto& [i, fiber] : x.entries())
    for (const auto& [j, g] : fiber.entries()) out.set({i, j}, g);
  return out;
}

// (beta_j(x_{pi(j)}))_j for a bijection pi : J -> I.
template <class I, class J, class G>
WeakProduct<J, G> relabel(const WeakProduct<I, G>& x, const std::map<J, I>& pi,
                          const std::function<G(const J&, const G&)>& beta) {
  std::set<I> hit;
  std::set<J> index;
  for (const auto& [j, i] : pi) {
    if (!x.index().count(i)) fail(ErrorKind::NotBijective, "relabeling leaves the index set");
    if (!hit.insert(i).second) fail(ErrorKind::NotBijective, "relabeling is not injective");
    index.insert(j);
  }
  if (hit.size() != x.index().size()) fail(ErrorKind::NotBijective, "relabeling is not surjective");
  WeakProduct<J, G> out(index);
  for (const auto& [j, i] : pi)
    if (const G* g = x.find(i)) out.set(j, beta(j, *g));
  return out;
}

using BallProduct = WeakProduct<Ball, DiffeoWord>;

// Finitely supported tuples; all-zero vectors are not stored.
template <class Key>
using SparseTuple = std::map<Key, PadicVector>;

// (f_i(x_i [, p]))_i. Every f_i outside the exceptional set must vanish at
// x_i = 0 (for every parameter when p is given); ZeroConditionViolated names
// the first index that does not.
template <class Key>
SparseTuple<Key> oplus_apply(const std::map<Key, FunctionModel>& fs, const std::set<Key>& exceptional,
                             const SparseTuple<Key>& x, const std::optional<PadicVector>& param = std::nullopt);

// Does f(0, .) vanish identically, the first d coordinates being the x part?
bool vanishes_at_zero(const FunctionModel& f, int d);
bool is_zero_vector(std::span<const Padic> x);

// Global map of a finite disjoint union of balls: on source ball C_j it is
// the affine identification C_j -> D_j after the diffeo inner_j of C_j.
struct GlobalPiece {
  AffineIsometry map;
  DiffeoWord inner;
};

class GlobalDiffeo {
 public:
  GlobalDiffeo() = default;
  // NotBijective unless sources and targets both tile the same region.
  static GlobalDiffeo make(const PadicContext& ctx, std::vector<GlobalPiece> pieces);

  const PadicContext& context() const noexcept { return ctx_; }
  const std::vector<GlobalPiece>& pieces() const noexcept { return pieces_; }
  const Region& region() const noexcept { return region_; }
  std::vector<Ball> sources() const;

  PadicVector eval(std::span<const Padic> x, Valuation precision) const;
  PadicVector eval_inverse(std::span<const Padic> y, Valuation precision) const;

 private:
  PadicContext ctx_;
  std::vector<GlobalPiece> pieces_;
  Region region_;
};

// gamma eta gamma^-1 as an element over the target balls. The index set of
// eta must be exactly gamma's source balls (RefinementMismatch otherwise).
BallProduct conjugate_global(const GlobalDiffeo& gamma, const BallProduct& eta, int level = 3);

// The map on the whole region: identity outside the support.
PadicVector apply(const BallProduct& x, const PadicContext& ctx, std::span<const Padic> point, Valuation precision);

// Permutation of the residues mod p^L of a region (as indices into
// region_points) induced by a map that preserves the region.
Permutation region_permutation(const Region& U, int L,
                               const std::function<PadicVector(std::span<const Padic>)>& map,
                               const PadicContext& ctx);

template <class Key>
SparseTuple<Key> oplus_apply(const std::map<Key, FunctionModel>& fs, const std::set<Key>& exceptional,
                             const SparseTuple<Key>& x, const std::optional<PadicVector>& param) {
  const std::size_t pd = param ? param->size() : 0;
  for (const auto& [k, f] : fs) {
    if (exceptional.count(k)) continue;
    if (f.dim() < static_cast<int>(pd)) fail(ErrorKind::InvalidArgument, "map has fewer inputs than parameters");
    if (!vanishes_at_zero(f, f.dim() - static_cast<int>(pd)))
      fail(ErrorKind::ZeroConditionViolated, "map at index " + std::to_string(std::distance(fs.begin(), fs.find(k))) +
                                                 " does not vanish at zero");
  }
  for (const auto& k : exceptional)
    if (!fs.count(k)) fail(ErrorKind::MalformedIndex, "exceptional index without a map");
  std::set<Key> active(exceptional);
  for (const auto& [k, v] : x) {
    if (!fs.count(k)) fail(ErrorKind::MalformedIndex, "tuple entry outside the index set");
    active.insert(k);
  }
  SparseTuple<Key> out;
  for (const auto& k : active) {
    const FunctionModel& f = fs.at(k);
    const int d = f.dim() - static_cast<int>(pd);
    auto it = x.find(k);
    PadicVector arg = it == x.end() ? zero_vector(f.context(), static_cast<std::size_t>(d)) : it->second;
    if (static_cast<int>(arg.size()) != d) fail(ErrorKind::InvalidArgument, "tuple entry has the wrong dimension");
    if (param) arg.insert(arg.end(), param->begin(), param->end());
    PadicVector y = f.eval(arg);
    if (!is_zero_vector(y)) out.emplace(k, std::move(y));
  }
  return out;
}

}  // namespace ucalc
