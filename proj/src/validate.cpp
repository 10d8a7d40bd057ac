#include "kcdag/validate.hpp"

#include <algorithm>
#include <numeric>

namespace kcdag {

namespace {

bool eval(const DiagramStore& store, VertexId v, const std::vector<char>& value) {
  while (store.is_decision(v)) v = value[store.rank(v)] ? store.hi(v) : store.lo(v);
  if (store.is_leaf(v)) return v == VertexId::top();
  for (auto c : store.children(v)) {
    if (!eval(store, c, value)) return false;
  }
  return true;
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t a) {
  while (parent[a] != a) a = parent[a] = parent[parent[a]];
  return a;
}

}  // namespace

Validator::Validator(const DiagramStore& store, ValidationOptions options)
    : store_(store), options_(options) {}

// An implicate is a cube (digit 0/1 fixed, 2 free) with no model; it is prime
// when freeing any fixed digit gives a cube with a model. For a satisfiable
// function without inessential variables the finest decomposition groups the
// variables that co-occur in some prime implicate.
const Validator::Blocks& Validator::blocks(VertexId v) {
  if (auto it = blocks_.find(v); it != blocks_.end()) return it->second;
  auto ranks = store_.var_ranks(v);
  const std::size_t n = ranks.size();
  std::vector<std::size_t> pow3(n + 1, 1);
  for (std::size_t k = 0; k < n; ++k) pow3[k + 1] = pow3[k] * 3;

  std::vector<char> value(store_.num_vars(), 0);
  std::vector<char> has_model(pow3[n], 0);
  for (std::size_t c = 0; c < pow3[n]; ++c) {
    std::size_t t = c;
    std::size_t k = 0;
    while (k < n && t % 3 != 2) {
      value[ranks[k]] = static_cast<char>(t % 3);
      t /= 3;
      ++k;
    }
    if (k == n) {
      has_model[c] = eval(store_, v, value);
    } else {
      has_model[c] = has_model[c - 2 * pow3[k]] || has_model[c - pow3[k]];
    }
  }

  Blocks result;
  if (has_model[pow3[n] - 1]) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> essential(n, 0);
    std::vector<std::size_t> fixed;
    for (std::size_t c = 0; c < pow3[n]; ++c) {
      if (has_model[c]) continue;
      fixed.clear();
      bool prime = true;
      std::size_t t = c;
      for (std::size_t k = 0; k < n && prime; ++k, t /= 3) {
        auto d = t % 3;
        if (d == 2) continue;
        fixed.push_back(k);
        prime = has_model[c + (2 - d) * pow3[k]];
      }
      if (!prime) continue;
      for (auto k : fixed) {
        essential[k] = 1;
        parent[find(parent, k)] = find(parent, fixed.front());
      }
    }
    if (std::all_of(essential.begin(), essential.end(), [](char e) { return e != 0; })) {
      std::vector<std::vector<std::uint32_t>> groups(n);
      for (std::size_t k = 0; k < n; ++k) groups[find(parent, k)].push_back(ranks[k]);
      std::erase_if(groups, [](const auto& g) { return g.empty(); });
      std::sort(groups.begin(), groups.end());
      result = std::move(groups);
    }
  }
  return blocks_.emplace(v, std::move(result)).first->second;
}

ValidationReport Validator::run(VertexId root, Bound i) {
  ValidationReport report;
  auto flag = [](bool& ok, std::vector<VertexId>& ids, VertexId v) {
    ok = false;
    ids.push_back(v);
  };
  for (auto v : topological_order(store_, root)) {
    if (store_.is_leaf(v)) continue;
    if (store_.is_decision(v)) {
      for (auto c : {store_.lo(v), store_.hi(v)}) {
        if (!store_.is_leaf(c) && store_.least_rank(c) <= store_.rank(v)) {
          flag(report.ordered_ok, report.unordered, v);
          break;
        }
      }
      if (store_.lo(v) == store_.hi(v)) flag(report.reduced_ok, report.unreduced, v);
    } else {
      auto children = store_.children(v);
      bool ok = children.size() >= 2;
      std::size_t large = 0;
      std::vector<std::uint32_t> seen;
      for (std::size_t k = 0; k < children.size() && ok; ++k) {
        auto c = children[k];
        if (store_.is_leaf(c) || store_.is_conj(c)) {
          ok = false;
          break;
        }
        if (k > 0 && store_.least_rank(children[k - 1]) >= store_.least_rank(c)) ok = false;
        if (i.exceeded_by(store_.var_count(c))) ++large;
        auto r = store_.var_ranks(c);
        seen.insert(seen.end(), r.begin(), r.end());
      }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) ok = false;
      if (!ok || large > 1) flag(report.bounded_ok, report.unbounded, v);
    }

    if (store_.var_count(v) > options_.finest_limit) {
      report.finest_skipped = true;
      continue;
    }
    const auto& finest = blocks(v);
    if (!finest) {
      flag(report.decomposition_finest_ok, report.not_finest, v);
      continue;
    }
    std::vector<std::vector<std::uint32_t>> expected;
    std::vector<std::uint32_t> merged;
    for (const auto& b : *finest) {
      if (i.exceeded_by(b.size())) {
        merged.insert(merged.end(), b.begin(), b.end());
      } else {
        expected.push_back(b);
      }
    }
    if (!merged.empty()) {
      std::sort(merged.begin(), merged.end());
      expected.push_back(std::move(merged));
    }
    std::sort(expected.begin(), expected.end());
    bool finest_ok;
    if (store_.is_decision(v)) {
      finest_ok = expected.size() == 1;
    } else {
      std::vector<std::vector<std::uint32_t>> actual;
      for (auto c : store_.children(v)) {
        auto r = store_.var_ranks(c);
        actual.emplace_back(r.begin(), r.end());
      }
      std::sort(actual.begin(), actual.end());
      finest_ok = actual == expected;
    }
    if (!finest_ok) flag(report.decomposition_finest_ok, report.not_finest, v);
  }
  return report;
}

ValidationReport validate(const DiagramStore& store, VertexId root, Bound i,
                          ValidationOptions options) {
  return Validator(store, options).run(root, i);
}

}  // namespace kcdag
