#pragma once

#include "kcdag/bound.hpp"
#include "kcdag/store.hpp"

namespace kcdag {

/// Converts a canonical ROBDD[AND_ĵ] vertex to the canonical ROBDD[AND_î]
/// vertex of the same function, for i <= j. The source bound j is the least
/// bound the vertex is structurally valid for. Large conj children are
/// merged and Shannon-expanded on their least variable. Throws
/// PreconditionError when `u` is not canonical at that bound, or when i
/// exceeds it and `u` is not canonical at i. Memoised under
/// (convert_down, u, i).
VertexId convert_down(DiagramStore& store, VertexId u, Bound i);

}  // namespace kcdag
