#pragma once

// Operations and queries over canonical ROBDD[AND_î] diagrams.
//
// Every operation takes canonical operands at bound i and returns a canonical
// vertex at the same bound, so equivalence reduces to handle equality.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kcdag/bound.hpp"
#include "kcdag/formula.hpp"
#include "kcdag/store.hpp"

namespace kcdag {

VertexId condition(DiagramStore& store, VertexId u, const Assignment& assignment, Bound i);
VertexId conjoin(DiagramStore& store, VertexId u, VertexId v, Bound i);
VertexId disjoin(DiagramStore& store, VertexId u, VertexId v, Bound i);
VertexId negate(DiagramStore& store, VertexId u, Bound i);

/// Existential quantification; variables are eliminated deepest first.
VertexId forget(DiagramStore& store, VertexId u, std::span<const Variable> vars, Bound i);

bool is_consistent(const DiagramStore& store, VertexId u);
bool is_valid(const DiagramStore& store, VertexId u);
bool entails_clause(DiagramStore& store, VertexId u, const Clause& clause, Bound i);
/// `term` is a consistent conjunction of literals given as an assignment.
bool implied_by_term(DiagramStore& store, VertexId u, const Assignment& term, Bound i);
bool equivalent(VertexId u, VertexId v);
/// u |= v.
bool entails(DiagramStore& store, VertexId u, VertexId v, Bound i);

/// Number of models over `scope`, which must contain every variable of u.
BigInt model_count(const DiagramStore& store, VertexId u, std::span<const Variable> scope);

/// Lazy enumeration of the models of u over a scope. Models are produced in
/// a fixed order: low branches before high branches, free variables counted
/// from all-false upwards.
class ModelStream {
 public:
  ModelStream(const DiagramStore& store, VertexId u, std::span<const Variable> scope);
  ~ModelStream();
  ModelStream(ModelStream&&) noexcept;
  ModelStream& operator=(ModelStream&&) noexcept;

  /// Next model over the scope, or nullopt once exhausted.
  std::optional<Assignment> next();

  struct Cursor;

 private:
  const DiagramStore* store_;
  std::vector<Variable> scope_;
  std::vector<Variable> free_;
  std::unique_ptr<Cursor> root_;
  std::vector<bool> free_bits_;
  bool started_ = false;
  bool done_ = false;
};

ModelStream enumerate_models(const DiagramStore& store, VertexId u,
                             std::span<const Variable> scope);

}  // namespace kcdag
