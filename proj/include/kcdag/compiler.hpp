#pragma once

// Bottom-up compilation of CNF into canonical ROBDD[AND_î] diagrams.

#include <string_view>

#include "kcdag/bound.hpp"
#include "kcdag/formula.hpp"
#include "kcdag/store.hpp"

namespace kcdag {

enum class Schedule { sequential, balanced };

/// Parses "sequential" or "balanced".
Schedule parse_schedule(std::string_view text);

/// Canonical diagram of one clause: a decision chain in order, false at the
/// end. Tautologies give true, the empty clause false.
VertexId compile_clause(DiagramStore& store, const Clause& clause, Bound i);

/// Conjoins the clause diagrams under `schedule`. The store's order must
/// cover the CNF's variables.
VertexId compile(DiagramStore& store, const Cnf& cnf, Bound i,
                 Schedule schedule = Schedule::balanced);

/// Compiles at bound 1, decomposes to inf, then converts down to i.
VertexId compile_via(DiagramStore& store, const Cnf& cnf, Bound i);

}  // namespace kcdag
