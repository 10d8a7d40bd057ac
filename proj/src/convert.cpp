#include "kcdag/convert.hpp"

#include <vector>

#include "kcdag/decompose.hpp"
#include "kcdag/ops.hpp"

namespace kcdag {

namespace {

class Converter {
 public:
  Converter(DiagramStore& store, Bound from, Bound to) : store_(store), from_(from), to_(to) {}

  VertexId run(VertexId u) {
    if (store_.is_leaf(u)) return u;
    if (auto hit = store_.memo_find(MemoOp::convert_down, u, u, to_)) return *hit;
    VertexId result;
    if (store_.is_decision(u)) {
      auto lo = run(store_.lo(u));
      auto hi = run(store_.hi(u));
      result = reduce_decision(store_, store_.rank(u), lo, hi, to_);
    } else {
      std::vector<VertexId> parts;
      std::vector<VertexId> large;
      for (auto c : store_.children(u)) {
        (to_.exceeded_by(store_.var_count(c)) ? large : parts).push_back(c);
      }
      if (large.size() == 1) {
        // a single large child may still hold conj vertices with several
        // children over the target bound
        parts.push_back(run(large.front()));
      } else if (large.size() > 1) {
        auto v = store_.make_conj(large);
        auto x = store_.least_rank(v);
        auto var = store_.order().at(x);
        auto lo = condition(store_, v, Assignment{{var.index(), false}}, from_);
        auto hi = condition(store_, v, Assignment{{var.index(), true}}, from_);
        parts.push_back(run(store_.make_decision_at_rank(x, lo, hi)));
      }
      result = conjoin_disjoint(store_, parts, to_);
    }
    store_.memo_store(MemoOp::convert_down, u, u, to_, result);
    return result;
  }

 private:
  DiagramStore& store_;
  Bound from_;
  Bound to_;
};

}  // namespace

VertexId convert_down(DiagramStore& store, VertexId u, Bound i) {
  auto from = structural_bound(store, u);
  if (i >= from) {
    if (decompose(store, u, i) != u) {
      throw PreconditionError("convert_down: input is not canonical at bound " + i.to_string());
    }
    return u;
  }
  if (decompose(store, u, from) != u) {
    throw PreconditionError("convert_down: input is not canonical at bound " + from.to_string());
  }
  return Converter(store, from, i).run(u);
}

}  // namespace kcdag
