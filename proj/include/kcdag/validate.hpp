#pragma once

// Structural and semantic checks for ROBDD[AND_î] diagrams.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kcdag/bound.hpp"
#include "kcdag/store.hpp"

namespace kcdag {

struct ValidationReport {
  bool ordered_ok = true;
  bool reduced_ok = true;
  bool bounded_ok = true;
  bool decomposition_finest_ok = true;
  /// Some vertex was too wide for the semantic check; decomposition_finest_ok
  /// only covers the vertices that were checked.
  bool finest_skipped = false;

  std::vector<VertexId> unordered;
  std::vector<VertexId> unreduced;
  std::vector<VertexId> unbounded;
  std::vector<VertexId> not_finest;

  bool structural_ok() const { return ordered_ok && reduced_ok && bounded_ok; }
  bool ok() const { return structural_ok() && decomposition_finest_ok; }
};

struct ValidationOptions {
  /// Vertices over more variables than this skip the semantic check.
  std::uint32_t finest_limit = 12;
};

/// Validates many diagrams of one store, caching the semantic decomposition
/// of every vertex it has examined. The store may grow between calls.
class Validator {
 public:
  explicit Validator(const DiagramStore& store, ValidationOptions options = {});

  ValidationReport run(VertexId root, Bound i);

 private:
  /// Finest AND-decomposition of a vertex as blocks of variable ranks, or
  /// nullopt when the function is unsatisfiable or has an inessential
  /// variable.
  using Blocks = std::optional<std::vector<std::vector<std::uint32_t>>>;

  const Blocks& blocks(VertexId v);

  const DiagramStore& store_;
  ValidationOptions options_;
  std::unordered_map<VertexId, Blocks> blocks_;
};

ValidationReport validate(const DiagramStore& store, VertexId root, Bound i,
                          ValidationOptions options = {});

}  // namespace kcdag
