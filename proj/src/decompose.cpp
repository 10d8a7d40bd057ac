#include "kcdag/decompose.hpp"

#include <algorithm>
#include <vector>

#include "parts.hpp"

namespace kcdag {

namespace {

/// Conjuncts of a non-leaf vertex: its children for a conj vertex, itself
/// otherwise.
std::span<const VertexId> parts_of(const DiagramStore& store, const VertexId& v) {
  if (store.is_conj(v)) return store.children(v);
  return {&v, 1};
}

bool contains(std::span<const VertexId> set, VertexId v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

/// |{x} ∪ vars(lo) ∪ vars(hi)|.
std::size_t decision_width(const DiagramStore& store, VertexId lo, VertexId hi) {
  auto a = store.var_ranks(lo);
  auto b = store.var_ranks(hi);
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return 1 + a.size() + b.size() - common;
}

VertexId literal_at_rank(DiagramStore& store, std::uint32_t rank, bool positive) {
  return positive ? store.make_decision_at_rank(rank, VertexId::bottom(), VertexId::top())
                  : store.make_decision_at_rank(rank, VertexId::top(), VertexId::bottom());
}

VertexId leaf_case(DiagramStore& store, std::uint32_t rank, VertexId lo, VertexId hi,
                   Bound i) {
  if (!i.is_infinite() && i.value() == 0) return store.make_decision_at_rank(rank, lo, hi);
  bool positive = lo == VertexId::bottom();
  VertexId pair[2] = {literal_at_rank(store, rank, positive), positive ? hi : lo};
  return conjoin_disjoint(store, pair, i);
}

/// Shared-conjunct factoring behind both extract_part and extract_share.
VertexId factor_shared(DiagramStore& store, std::uint32_t rank, VertexId lo, VertexId hi,
                       Bound i) {
  auto lo_parts = parts_of(store, lo);
  auto hi_parts = parts_of(store, hi);
  Parts shared;
  for (auto p : lo_parts) {
    if (contains(hi_parts, p)) shared.push_back(p);
  }
  if (shared.empty()) return store.make_decision_at_rank(rank, lo, hi);

  std::size_t shared_width = 0;
  for (auto p : shared) shared_width += store.var_count(p);
  const std::size_t residue = decision_width(store, lo, hi) - shared_width;
  if (i.exceeded_by(residue)) {
    shared.erase(std::remove_if(shared.begin(), shared.end(),
                                [&](VertexId p) { return i.exceeded_by(store.var_count(p)); }),
                 shared.end());
  }
  if (shared.empty()) return store.make_decision_at_rank(rank, lo, hi);

  auto rest = [&](std::span<const VertexId> parts) {
    Parts kept;
    for (auto p : parts) {
      if (!contains(shared, p)) kept.push_back(p);
    }
    return store.make_conj(kept);
  };
  auto lo_rest = rest(lo_parts);
  auto hi_rest = rest(hi_parts);
  shared.push_back(reduce_decision(store, rank, lo_rest, hi_rest, i));
  return conjoin_disjoint(store, shared, i);
}

bool has_part_relation(const DiagramStore& store, VertexId lo, VertexId hi) {
  if (store.is_leaf(lo) || store.is_leaf(hi)) return false;
  if (!store.is_conj(lo) && store.is_conj(hi)) return contains(store.children(hi), lo);
  if (store.is_conj(lo) && !store.is_conj(hi)) return contains(store.children(lo), hi);
  return false;
}

bool has_share_relation(const DiagramStore& store, VertexId lo, VertexId hi) {
  if (!store.is_conj(lo) || !store.is_conj(hi)) return false;
  auto hi_parts = store.children(hi);
  return std::any_of(store.children(lo).begin(), store.children(lo).end(),
                     [&](VertexId p) { return contains(hi_parts, p); });
}

VertexId merge_large(DiagramStore& store, std::span<const VertexId> large, Bound i) {
  if (auto hit = store.memo_find(MemoOp::merge, large, i)) return *hit;
  // `large` is sorted by least variable; its head is a decision vertex on the
  // least variable of the whole group.
  const auto head = large.front();
  const auto rank = store.rank(head);
  Parts branch(large.begin() + 1, large.end());
  branch.push_back(store.lo(head));
  auto lo = conjoin_disjoint(store, branch, i);
  branch.back() = store.hi(head);
  auto hi = conjoin_disjoint(store, branch, i);
  auto result = reduce_decision(store, rank, lo, hi, i);
  store.memo_store(MemoOp::merge, large, i, result);
  return result;
}

VertexId decompose_rec(DiagramStore& store, VertexId u, Bound i) {
  if (store.is_leaf(u)) return u;
  if (auto hit = store.memo_find(MemoOp::decompose, u, u, i)) return *hit;
  VertexId result;
  if (store.is_decision(u)) {
    auto lo = decompose_rec(store, store.lo(u), i);
    auto hi = decompose_rec(store, store.hi(u), i);
    result = reduce_decision(store, store.rank(u), lo, hi, i);
  } else {
    Parts children(store.children(u).begin(), store.children(u).end());
    for (auto& c : children) c = decompose_rec(store, c, i);
    result = conjoin_disjoint(store, children, i);
  }
  store.memo_store(MemoOp::decompose, u, u, i, result);
  return result;
}

}  // namespace

VertexId reduce_decision(DiagramStore& store, std::uint32_t rank, VertexId lo, VertexId hi,
                         Bound i) {
  if ((lo == VertexId::bottom() || hi == VertexId::bottom()) &&
      decision_width(store, lo, hi) > 1) {
    return leaf_case(store, rank, lo, hi, i);
  }
  if (has_part_relation(store, lo, hi) || has_share_relation(store, lo, hi)) {
    return factor_shared(store, rank, lo, hi, i);
  }
  if (lo == hi) return lo;
  return store.make_decision_at_rank(rank, lo, hi);
}

VertexId conjoin_disjoint(DiagramStore& store, std::span<const VertexId> operands, Bound i) {
  Parts small;
  Parts large;
  for (auto op : operands) {
    if (op == VertexId::bottom()) return VertexId::bottom();
    if (op == VertexId::top()) continue;
    for (auto p : parts_of(store, op)) {
      (i.exceeded_by(store.var_count(p)) ? large : small).push_back(p);
    }
  }
  if (large.size() > 1) {
    std::sort(large.begin(), large.end(), [&store](VertexId a, VertexId b) {
      return store.least_rank(a) < store.least_rank(b);
    });
    small.push_back(merge_large(store, large, i));
  } else if (large.size() == 1) {
    small.push_back(large.front());
  }
  return store.make_conj(small);
}

VertexId finest(DiagramStore& store, std::span<const VertexId> children) {
  std::vector<VertexId> flat;
  for (auto c : children) {
    if (store.is_conj(c)) {
      flat.insert(flat.end(), store.children(c).begin(), store.children(c).end());
    } else {
      flat.push_back(c);
    }
  }
  return store.make_conj(flat);
}

VertexId extract_leaf(DiagramStore& store, VertexId u, Bound i) {
  if (!store.is_decision(u)) throw PreconditionError("extract_leaf: not a decision vertex");
  auto lo = store.lo(u);
  auto hi = store.hi(u);
  if ((lo != VertexId::bottom() && hi != VertexId::bottom()) || store.var_count(u) <= 1) {
    throw PreconditionError("extract_leaf: needs a false child and more than one variable");
  }
  return leaf_case(store, store.rank(u), lo, hi, i);
}

VertexId extract_part(DiagramStore& store, VertexId u, Bound i) {
  if (!store.is_decision(u) || !has_part_relation(store, store.lo(u), store.hi(u))) {
    throw PreconditionError("extract_part: no child is a conjunct of the other");
  }
  return factor_shared(store, store.rank(u), store.lo(u), store.hi(u), i);
}

VertexId extract_share(DiagramStore& store, VertexId u, Bound i) {
  if (!store.is_decision(u) || !has_share_relation(store, store.lo(u), store.hi(u))) {
    throw PreconditionError("extract_share: children are not conj vertices sharing a conjunct");
  }
  return factor_shared(store, store.rank(u), store.lo(u), store.hi(u), i);
}

Bound structural_bound(const DiagramStore& store, VertexId u) {
  std::size_t bound = 0;
  for (auto v : topological_order(store, u)) {
    if (!store.is_conj(v)) continue;
    std::size_t first = 0;
    std::size_t second = 0;
    for (auto c : store.children(v)) {
      auto n = store.var_count(c);
      if (n > first) {
        second = first;
        first = n;
      } else if (n > second) {
        second = n;
      }
    }
    bound = std::max(bound, second);
  }
  return Bound(static_cast<std::uint32_t>(bound));
}

VertexId decompose(DiagramStore& store, VertexId u, Bound i) {
  if (i < structural_bound(store, u)) {
    throw PreconditionError("decompose: input has a conj vertex with two children over " +
                            i.to_string() + " variables");
  }
  return decompose_rec(store, u, i);
}

}  // namespace kcdag
