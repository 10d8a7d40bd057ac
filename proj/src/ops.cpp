#include "kcdag/ops.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "kcdag/decompose.hpp"
#include "parts.hpp"

namespace kcdag {

namespace {

std::span<const VertexId> parts_of(const DiagramStore& store, const VertexId& v) {
  if (store.is_conj(v)) return store.children(v);
  return {&v, 1};
}

bool contains(std::span<const VertexId> set, VertexId v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

bool has_rank(const DiagramStore& store, VertexId v, std::uint32_t rank) {
  auto vars = store.var_ranks(v);
  return std::binary_search(vars.begin(), vars.end(), rank);
}

struct Ranks : boost::container::small_vector<std::uint32_t, 8> {
  operator std::span<const std::uint32_t>() const noexcept { return {data(), size()}; }
};

bool overlaps(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

/// Cofactor of u on the variable at `rank`, which must not come after the
/// least variable of u.
VertexId cofactor(DiagramStore& store, VertexId u, std::uint32_t rank, bool value, Bound i) {
  if (store.is_leaf(u) || store.least_rank(u) != rank) return u;
  if (store.is_decision(u)) return value ? store.hi(u) : store.lo(u);
  Parts parts(store.children(u).begin(), store.children(u).end());
  // conj children are sorted by least variable
  parts.front() = cofactor(store, parts.front(), rank, value, i);
  return conjoin_disjoint(store, parts, i);
}

std::uint32_t least_of(const DiagramStore& store, VertexId u, VertexId v) {
  if (store.is_leaf(u)) return store.least_rank(v);
  if (store.is_leaf(v)) return store.least_rank(u);
  return std::min(store.least_rank(u), store.least_rank(v));
}

template <typename Op>
VertexId shannon(DiagramStore& store, VertexId u, VertexId v, Bound i, Op op) {
  auto x = least_of(store, u, v);
  auto lo = op(cofactor(store, u, x, false, i), cofactor(store, v, x, false, i));
  auto hi = op(cofactor(store, u, x, true, i), cofactor(store, v, x, true, i));
  return reduce_decision(store, x, lo, hi, i);
}

/// Conditioning on a term, a conjunction of literals interned as a vertex
/// so results can be memoised in the store.
class TermRestrictor {
 public:
  TermRestrictor(DiagramStore& store, std::span<const VertexId> literals, Bound i)
      : store_(store), bound_(i) {
    for (auto l : literals) terms_.push_back({store.rank(l), store.hi(l) == VertexId::top()});
    std::sort(terms_.begin(), terms_.end());
    for (auto [r, value] : terms_) ranks_.push_back(r);
    term_ = store.make_conj(literals);
  }

  VertexId run(VertexId u) {
    if (store_.is_leaf(u) || !overlaps(store_.var_ranks(u), ranks_)) return u;
    if (auto hit = store_.memo_find(MemoOp::restrict, u, term_, bound_)) return *hit;
    VertexId result;
    if (store_.is_decision(u)) {
      auto r = store_.rank(u);
      auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{r, false});
      if (it != terms_.end() && it->first == r) {
        result = run(it->second ? store_.hi(u) : store_.lo(u));
      } else {
        auto lo = run(store_.lo(u));
        auto hi = run(store_.hi(u));
        result = reduce_decision(store_, r, lo, hi, bound_);
      }
    } else {
      Parts parts(store_.children(u).begin(), store_.children(u).end());
      for (auto& p : parts) p = run(p);
      result = conjoin_disjoint(store_, parts, bound_);
    }
    store_.memo_store(MemoOp::restrict, u, term_, bound_, result);
    return result;
  }

 private:
  DiagramStore& store_;
  Bound bound_;
  boost::container::small_vector<std::pair<std::uint32_t, bool>, 8> terms_;
  Ranks ranks_;
  VertexId term_;
};

struct UnionFind {
  boost::container::small_vector<std::size_t, 8> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

class Conditioner {
 public:
  Conditioner(DiagramStore& store, const Assignment& assignment, Bound i)
      : store_(store), bound_(i), value_(store.num_vars(), -1) {
    for (auto [index, value] : assignment.values()) {
      auto r = store.order().rank(Variable(index));
      value_[r] = value ? 1 : 0;
      assigned_.push_back(r);
    }
    std::sort(assigned_.begin(), assigned_.end());
  }

  VertexId run(VertexId u) {
    if (store_.is_leaf(u) || !overlaps(store_.var_ranks(u), assigned_)) return u;
    if (auto it = memo_.find(u); it != memo_.end()) return it->second;
    VertexId result;
    if (store_.is_decision(u)) {
      auto r = store_.rank(u);
      if (value_[r] >= 0) {
        result = run(value_[r] ? store_.hi(u) : store_.lo(u));
      } else {
        auto lo = run(store_.lo(u));
        auto hi = run(store_.hi(u));
        result = reduce_decision(store_, r, lo, hi, bound_);
      }
    } else {
      Parts parts(store_.children(u).begin(), store_.children(u).end());
      for (auto& p : parts) p = run(p);
      result = conjoin_disjoint(store_, parts, bound_);
    }
    memo_.emplace(u, result);
    return result;
  }

 private:
  DiagramStore& store_;
  Bound bound_;
  std::vector<int> value_;
  std::vector<std::uint32_t> assigned_;
  std::unordered_map<VertexId, VertexId> memo_;
};

class Eliminator {
 public:
  Eliminator(DiagramStore& store, std::uint32_t rank, Bound i)
      : store_(store), rank_(rank), bound_(i) {}

  VertexId run(VertexId u) {
    if (store_.is_leaf(u) || !has_rank(store_, u, rank_)) return u;
    if (auto it = memo_.find(u); it != memo_.end()) return it->second;
    VertexId result;
    if (store_.is_decision(u)) {
      if (store_.rank(u) == rank_) {
        result = disjoin(store_, store_.lo(u), store_.hi(u), bound_);
      } else {
        auto lo = run(store_.lo(u));
        auto hi = run(store_.hi(u));
        result = reduce_decision(store_, store_.rank(u), lo, hi, bound_);
      }
    } else {
      Parts parts(store_.children(u).begin(), store_.children(u).end());
      for (auto& p : parts) p = run(p);
      result = conjoin_disjoint(store_, parts, bound_);
    }
    memo_.emplace(u, result);
    return result;
  }

 private:
  DiagramStore& store_;
  std::uint32_t rank_;
  Bound bound_;
  std::unordered_map<VertexId, VertexId> memo_;
};

}  // namespace

VertexId condition(DiagramStore& store, VertexId u, const Assignment& assignment, Bound i) {
  return Conditioner(store, assignment, i).run(u);
}

VertexId conjoin(DiagramStore& store, VertexId u, VertexId v, Bound i) {
  if (u == VertexId::bottom() || v == VertexId::bottom()) return VertexId::bottom();
  if (u == VertexId::top() || u == v) return v;
  if (v == VertexId::top()) return u;
  if (v < u) std::swap(u, v);
  if (auto hit = store.memo_find(MemoOp::conjoin, u, v, i)) return *hit;

  auto rec = [&](VertexId a, VertexId b) { return conjoin(store, a, b, i); };
  VertexId result;
  if (!overlaps(store.var_ranks(u), store.var_ranks(v))) {
    VertexId pair[2] = {u, v};
    result = conjoin_disjoint(store, pair, i);
  } else if (!store.is_conj(u) && !store.is_conj(v)) {
    result = shannon(store, u, v, i, rec);
  } else {
    auto u_parts = parts_of(store, u);
    auto v_parts = parts_of(store, v);
    // literal conjuncts are implied by u and v: condition both sides on them
    Parts literals;
    for (auto p : u_parts) {
      if (store.var_count(p) == 1) literals.push_back(p);
    }
    for (auto p : v_parts) {
      if (store.var_count(p) != 1 || contains(literals, p)) continue;
      auto r = store.rank(p);
      for (auto l : literals) {
        if (store.rank(l) == r) {
          store.memo_store(MemoOp::conjoin, u, v, i, VertexId::bottom());
          return VertexId::bottom();
        }
      }
      literals.push_back(p);
    }
    if (!literals.empty()) {
      auto core = [&](std::span<const VertexId> parts) {
        Parts kept;
        for (auto p : parts) {
          if (store.var_count(p) != 1) kept.push_back(p);
        }
        auto c = store.make_conj(kept);
        Parts relevant;
        for (auto l : literals) {
          if (has_rank(store, c, store.rank(l))) relevant.push_back(l);
        }
        if (relevant.empty()) return c;
        return TermRestrictor(store, relevant, i).run(c);
      };
      auto u_rest = core(u_parts);
      auto v_rest = core(v_parts);
      literals.push_back(conjoin(store, u_rest, v_rest, i));
      result = conjoin_disjoint(store, literals, i);
      store.memo_store(MemoOp::conjoin, u, v, i, result);
      return result;
    }
    Parts items;
    boost::container::small_vector<bool, 8> from_u;
    Parts out;
    for (auto p : u_parts) {
      if (std::find(v_parts.begin(), v_parts.end(), p) != v_parts.end()) {
        out.push_back(p);
      } else {
        items.push_back(p);
        from_u.push_back(true);
      }
    }
    for (auto p : v_parts) {
      if (std::find(u_parts.begin(), u_parts.end(), p) == u_parts.end()) {
        items.push_back(p);
        from_u.push_back(false);
      }
    }
    UnionFind groups(items.size());
    for (std::size_t a = 0; a < items.size(); ++a) {
      for (std::size_t b = a + 1; b < items.size(); ++b) {
        if (from_u[a] != from_u[b] &&
            overlaps(store.var_ranks(items[a]), store.var_ranks(items[b]))) {
          groups.unite(a, b);
        }
      }
    }
    for (std::size_t a = 0; a < items.size(); ++a) {
      if (groups.find(a) != a) continue;
      Parts gu;
      Parts gv;
      for (std::size_t b = 0; b < items.size(); ++b) {
        if (groups.find(b) == a) (from_u[b] ? gu : gv).push_back(items[b]);
      }
      if (gu.empty() || gv.empty()) {
        out.insert(out.end(), gu.begin(), gu.end());
        out.insert(out.end(), gv.begin(), gv.end());
      } else {
        out.push_back(shannon(store, store.make_conj(gu), store.make_conj(gv), i, rec));
      }
    }
    result = conjoin_disjoint(store, out, i);
  }
  store.memo_store(MemoOp::conjoin, u, v, i, result);
  return result;
}

VertexId disjoin(DiagramStore& store, VertexId u, VertexId v, Bound i) {
  if (u == VertexId::top() || v == VertexId::top()) return VertexId::top();
  if (u == VertexId::bottom() || u == v) return v;
  if (v == VertexId::bottom()) return u;
  if (v < u) std::swap(u, v);
  if (auto hit = store.memo_find(MemoOp::disjoin, u, v, i)) return *hit;

  auto u_parts = parts_of(store, u);
  auto v_parts = parts_of(store, v);
  Parts common;
  for (auto p : u_parts) {
    if (std::find(v_parts.begin(), v_parts.end(), p) != v_parts.end()) common.push_back(p);
  }
  VertexId result;
  if (!common.empty()) {
    auto rest = [&](std::span<const VertexId> parts) {
      Parts kept;
      for (auto p : parts) {
        if (std::find(common.begin(), common.end(), p) == common.end()) kept.push_back(p);
      }
      return store.make_conj(kept);
    };
    auto u_rest = rest(u_parts);
    auto v_rest = rest(v_parts);
    common.push_back(disjoin(store, u_rest, v_rest, i));
    result = conjoin_disjoint(store, common, i);
  } else {
    result = shannon(store, u, v, i,
                     [&](VertexId a, VertexId b) { return disjoin(store, a, b, i); });
  }
  store.memo_store(MemoOp::disjoin, u, v, i, result);
  return result;
}

VertexId negate(DiagramStore& store, VertexId u, Bound i) {
  if (u == VertexId::bottom()) return VertexId::top();
  if (u == VertexId::top()) return VertexId::bottom();
  if (auto hit = store.memo_find(MemoOp::negate, u, u, i)) return *hit;
  auto x = store.least_rank(u);
  auto lo = negate(store, cofactor(store, u, x, false, i), i);
  auto hi = negate(store, cofactor(store, u, x, true, i), i);
  auto result = reduce_decision(store, x, lo, hi, i);
  store.memo_store(MemoOp::negate, u, u, i, result);
  return result;
}

VertexId forget(DiagramStore& store, VertexId u, std::span<const Variable> vars, Bound i) {
  std::vector<std::uint32_t> ranks;
  for (auto v : vars) ranks.push_back(store.order().rank(v));
  std::sort(ranks.begin(), ranks.end(), std::greater<>());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  for (auto r : ranks) u = Eliminator(store, r, i).run(u);
  return u;
}

bool is_consistent(const DiagramStore&, VertexId u) { return u != VertexId::bottom(); }

bool is_valid(const DiagramStore&, VertexId u) { return u == VertexId::top(); }

bool entails_clause(DiagramStore& store, VertexId u, const Clause& clause, Bound i) {
  auto falsifier = Assignment::falsifying(clause);
  if (!falsifier) return true;
  return condition(store, u, *falsifier, i) == VertexId::bottom();
}

bool implied_by_term(DiagramStore& store, VertexId u, const Assignment& term, Bound i) {
  return condition(store, u, term, i) == VertexId::top();
}

bool equivalent(VertexId u, VertexId v) { return u == v; }

bool entails(DiagramStore& store, VertexId u, VertexId v, Bound i) {
  return conjoin(store, u, negate(store, v, i), i) == VertexId::bottom();
}

BigInt model_count(const DiagramStore& store, VertexId u, std::span<const Variable> scope) {
  std::vector<Variable> distinct(scope.begin(), scope.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  // scope variables outside the store's order are unconstrained
  std::vector<std::uint32_t> scope_ranks;
  for (auto v : distinct) {
    if (v.index() <= store.num_vars()) scope_ranks.push_back(store.order().rank(v));
  }
  std::sort(scope_ranks.begin(), scope_ranks.end());
  auto vars = store.var_ranks(u);
  if (!std::includes(scope_ranks.begin(), scope_ranks.end(), vars.begin(), vars.end())) {
    throw PreconditionError("model_count: scope does not cover the diagram's variables");
  }

  std::unordered_map<VertexId, BigInt> memo;
  auto count = [&](auto& self, VertexId v) -> BigInt {
    if (v == VertexId::bottom()) return 0;
    if (v == VertexId::top()) return 1;
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    BigInt result;
    if (store.is_decision(v)) {
      auto width = store.var_count(v) - 1;
      for (auto child : {store.lo(v), store.hi(v)}) {
        BigInt c = self(self, child);
        if (c != 0) result += c << (width - store.var_count(child));
      }
    } else {
      result = 1;
      for (auto child : store.children(v)) result *= self(self, child);
    }
    memo.emplace(v, result);
    return result;
  };
  return count(count, u) << (distinct.size() - vars.size());
}

// Model enumeration ----------------------------------------------------------

namespace {

/// Binary odometer over `width` bits; returns false on wrap-around.
bool step(std::vector<bool>& bits) {
  for (std::size_t k = bits.size(); k-- > 0;) {
    if (!bits[k]) {
      bits[k] = true;
      return true;
    }
    bits[k] = false;
  }
  return false;
}

}  // namespace

struct ModelStream::Cursor {
  const DiagramStore& store;
  VertexId v;
  // decision state
  int branch = -1;
  std::vector<std::uint32_t> free;
  std::vector<bool> bits;
  std::unique_ptr<Cursor> child;
  // conj state
  std::vector<std::unique_ptr<Cursor>> parts;

  Cursor(const DiagramStore& s, VertexId vertex) : store(s), v(vertex) {}

  bool enter_branch(int b) {
    auto target = b ? store.hi(v) : store.lo(v);
    if (target == VertexId::bottom()) return false;
    branch = b;
    free.clear();
    auto all = store.var_ranks(v);
    auto sub = store.var_ranks(target);
    std::set_difference(all.begin() + 1, all.end(), sub.begin(), sub.end(),
                        std::back_inserter(free));
    bits.assign(free.size(), false);
    child = std::make_unique<Cursor>(store, target);
    return child->first();
  }

  bool first() {
    if (v == VertexId::bottom()) return false;
    if (v == VertexId::top()) return true;
    if (store.is_decision(v)) return enter_branch(0) || enter_branch(1);
    parts.clear();
    for (auto c : store.children(v)) {
      parts.push_back(std::make_unique<Cursor>(store, c));
      if (!parts.back()->first()) return false;
    }
    return true;
  }

  bool advance() {
    if (store.is_leaf(v)) return false;
    if (store.is_decision(v)) {
      if (step(bits)) return true;
      if (child->advance()) return true;
      return branch == 0 && enter_branch(1);
    }
    for (std::size_t k = parts.size(); k-- > 0;) {
      if (parts[k]->advance()) {
        for (std::size_t r = k + 1; r < parts.size(); ++r) parts[r]->first();
        return true;
      }
    }
    return false;
  }

  void write(std::vector<std::pair<std::uint32_t, bool>>& out) const {
    if (store.is_leaf(v)) return;
    if (store.is_decision(v)) {
      out.emplace_back(store.rank(v), branch == 1);
      for (std::size_t k = 0; k < free.size(); ++k) out.emplace_back(free[k], bits[k]);
      child->write(out);
      return;
    }
    for (const auto& p : parts) p->write(out);
  }
};

ModelStream::ModelStream(const DiagramStore& store, VertexId u, std::span<const Variable> scope)
    : store_(&store), scope_(scope.begin(), scope.end()) {
  auto vars = store.var_ranks(u);
  for (auto var : scope_) {
    if (var.index() > store.num_vars() ||
        !std::binary_search(vars.begin(), vars.end(), store.order().rank(var))) {
      free_.push_back(var);
    }
  }
  std::sort(free_.begin(), free_.end());
  free_.erase(std::unique(free_.begin(), free_.end()), free_.end());
  std::size_t covered = 0;
  for (auto r : vars) {
    auto var = store.order().at(r);
    if (std::find(scope_.begin(), scope_.end(), var) != scope_.end()) ++covered;
  }
  if (covered != vars.size()) {
    throw PreconditionError("enumerate_models: scope does not cover the diagram's variables");
  }
  root_ = std::make_unique<Cursor>(store, u);
  free_bits_.assign(free_.size(), false);
}

ModelStream::~ModelStream() = default;
ModelStream::ModelStream(ModelStream&&) noexcept = default;
ModelStream& ModelStream::operator=(ModelStream&&) noexcept = default;

std::optional<Assignment> ModelStream::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    if (!root_->first()) {
      done_ = true;
      return std::nullopt;
    }
  } else if (!step(free_bits_)) {
    free_bits_.assign(free_.size(), false);
    if (!root_->advance()) {
      done_ = true;
      return std::nullopt;
    }
  }
  std::vector<std::pair<std::uint32_t, bool>> bound;
  root_->write(bound);
  Assignment model;
  for (auto [rank, value] : bound) model.set(store_->order().at(rank), value);
  for (std::size_t k = 0; k < free_.size(); ++k) model.set(free_[k], free_bits_[k]);
  return model;
}

ModelStream enumerate_models(const DiagramStore& store, VertexId u,
                             std::span<const Variable> scope) {
  return ModelStream(store, u, scope);
}

}  // namespace kcdag
