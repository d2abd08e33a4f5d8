#pragma once

#include "entrocone/model.hpp"
#include "entrocone/row.hpp"

namespace entrocone {

// d-separation of X and Y by Z in the collapsed DAG: each preparation is one
// vertex (its members are jointly created), likewise the joint output set of
// each operation.  Throws std::runtime_error if the vertex images of X, Y, Z
// are not pairwise disjoint or X/Y is empty.
bool d_separated(const CausalStructure& structure, Mask x, Mask y, Mask z);

// Per maximal coexisting set T:
//   - I(i : j | K) >= 0 for i < j in T, K subseteq T \ {i,j}
//   - H(c | T \ {c}) >= 0 for classical c in T
//   - H(qW) + H(qW') - H(W) - H(W') >= 0 for quantum q in T and every
//     unordered bipartition (W, W') of T \ {q}
// deduplicated across sets.
ConstraintSystem elemental_inequalities(const CausalStructure& structure);

// Equality rows: local-Markov statements (each operation's joint output
// vertex against its non-descendants given its parents, preparations
// collapsed) plus mutual independence of all preparations, keeping only
// statements whose full support is a coexisting set.
ConstraintSystem conditional_independencies(const CausalStructure& structure);

// For every operation (inputs P, outputs O), every maximal coexisting set
// T containing O with (T \ O) u P coexisting, and every disjoint pair
// (W, Z) within T \ O with W nonempty:  I(W : O u Z) <= I(W : P u Z).
// W and Z additionally avoid strict descendants of O: a system downstream
// of O can carry the operation's fresh randomness, and conditioning on it
// (or correlating with it) breaks the bound.
ConstraintSystem data_processing_inequalities(const CausalStructure& structure);

// Elemental + independencies + data processing + caller-supplied rows,
// deduplicated, over subset_coordinates(structure).
ConstraintSystem assemble(const CausalStructure& structure,
                          const std::vector<ConstraintRow>& extra = {});

}  // namespace entrocone
