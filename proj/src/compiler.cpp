#include "kcdag/compiler.hpp"

#include <algorithm>
#include <vector>

#include "kcdag/convert.hpp"
#include "kcdag/decompose.hpp"
#include "kcdag/ops.hpp"

namespace kcdag {

Schedule parse_schedule(std::string_view text) {
  if (text == "sequential") return Schedule::sequential;
  if (text == "balanced") return Schedule::balanced;
  throw ParseError("unknown schedule '" + std::string(text) + "'");
}

VertexId compile_clause(DiagramStore& store, const Clause& clause, Bound i) {
  if (clause.is_tautology()) return VertexId::top();
  std::vector<Literal> lits(clause.literals().begin(), clause.literals().end());
  std::sort(lits.begin(), lits.end(), [&](const Literal& a, const Literal& b) {
    return store.order().rank(a.var) > store.order().rank(b.var);
  });
  auto chain = VertexId::bottom();
  for (const auto& lit : lits) {
    chain = lit.positive ? store.make_decision(lit.var, chain, VertexId::top())
                         : store.make_decision(lit.var, VertexId::top(), chain);
  }
  return decompose(store, chain, i);
}

VertexId compile(DiagramStore& store, const Cnf& cnf, Bound i, Schedule schedule) {
  if (cnf.num_vars > store.num_vars()) {
    throw PreconditionError("compile: variable order does not cover the CNF");
  }
  std::vector<VertexId> parts;
  parts.reserve(cnf.clauses.size());
  for (const auto& clause : cnf.clauses) {
    auto c = compile_clause(store, clause, i);
    if (c == VertexId::bottom()) return c;
    parts.push_back(c);
  }
  if (parts.empty()) return VertexId::top();

  if (schedule == Schedule::sequential) {
    auto acc = VertexId::top();
    for (auto p : parts) {
      acc = conjoin(store, acc, p, i);
      if (acc == VertexId::bottom()) break;
    }
    return acc;
  }
  while (parts.size() > 1) {
    std::vector<VertexId> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < parts.size(); k += 2) {
      auto c = conjoin(store, parts[k], parts[k + 1], i);
      if (c == VertexId::bottom()) return c;
      next.push_back(c);
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

VertexId compile_via(DiagramStore& store, const Cnf& cnf, Bound i) {
  auto one = compile(store, cnf, Bound(1));
  auto full = decompose(store, one, Bound::infinite());
  return convert_down(store, full, i);
}

}  // namespace kcdag
