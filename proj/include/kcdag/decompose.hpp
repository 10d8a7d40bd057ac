#pragma once

// Bottom-up canonicalisation of OBDD[AND_i] diagrams into ROBDD[AND_î].
//
// A vertex is canonical at bound i when every conj vertex lists the finest
// AND-decomposition of its function in which at most one conjunct has more
// than i variables, and no decision vertex admits such a decomposition with
// two or more conjuncts.

#include <span>

#include "kcdag/bound.hpp"
#include "kcdag/store.hpp"

namespace kcdag {

/// Canonical ROBDD[AND_î] vertex equivalent to `u`. Every conj vertex below
/// `u` must have at most one child with more than i variables, otherwise
/// throws PreconditionError. Memoised in the store under (decompose, u, i).
VertexId decompose(DiagramStore& store, VertexId u, Bound i);

/// Inlines conj children into one flat conj vertex. The inputs must have
/// pairwise disjoint variables.
VertexId finest(DiagramStore& store, std::span<const VertexId> children);

/// <x, false, h> becomes x AND h (and <x, h, false> becomes not-x AND h) for
/// i >= 1; at i = 0 the vertex is returned unchanged. Requires a false child
/// and more than one variable.
VertexId extract_leaf(DiagramStore& store, VertexId u, Bound i);

/// Handles <x, v1, AND(v1, ...)> and its mirror image by pulling v1 above
/// the decision. Returns `u` unchanged when both v1 and the residual decision
/// exceed the bound.
VertexId extract_part(DiagramStore& store, VertexId u, Bound i);

/// Handles decisions whose two conj children share conjuncts: the shared
/// conjuncts are pulled above the decision, except a shared conjunct over
/// more than i variables when the residual decision also exceeds i.
VertexId extract_share(DiagramStore& store, VertexId u, Bound i);

/// Canonical vertex for <x, lo, hi> where lo and hi are canonical at i and x
/// is the variable at `rank`, strictly before every variable of lo and hi.
/// Dispatches to the extract cases in order leaf, part, share, then the
/// lo == hi collapse.
VertexId reduce_decision(DiagramStore& store, std::uint32_t rank, VertexId lo,
                         VertexId hi, Bound i);

/// Canonical conjunction of canonical vertices with pairwise disjoint
/// variables: flattens conj operands and, when more than one resulting
/// conjunct exceeds the bound, merges those into a single decision vertex.
VertexId conjoin_disjoint(DiagramStore& store, std::span<const VertexId> operands, Bound i);

/// Least bound j such that every conj vertex below `u` has at most one child
/// over more than j variables.
Bound structural_bound(const DiagramStore& store, VertexId u);

}  // namespace kcdag
