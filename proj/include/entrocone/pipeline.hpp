#pragma once

#include <vector>

#include "entrocone/model.hpp"
#include "entrocone/polyhedron.hpp"

namespace entrocone {

// Source-merging rewrite: the rewritten structure plus the old-to-new system
// id map (members of a merged preparation all map to the merged system).
struct MergeResult {
  CausalStructure structure;
  std::vector<int> system_map;
  bool changed = false;
};

// In a fully classical structure, a multi-member preparation whose members
// all stay outside `keep_separate` and outside every declared marginal
// context can be replaced by a single classical source without changing the
// projection of the admissible cone onto the marginal coordinates: clumping
// the members maps admissible vectors onto the rewritten cone, and reading
// the members as simultaneous copies of the merged source maps back.  The
// rewrite is refused when any quantum system is present -- copies of a
// quantum system can violate the original monotonicity constraints, so the
// equivalence only holds classically.
MergeResult merge_classical_sources(const CausalStructure& structure,
                                    Mask keep_separate = 0);

// The admissible cone projected onto the declared marginal coordinates:
// assemble the constraint system, then eliminate every coordinate outside
// the marginal scenario.  `extra` rows (over subset_coordinates(structure))
// join the system before projection.  Fully classical structures are first
// simplified by merge_classical_sources, and their data-processing rows are
// skipped: each one is a rational combination of the operation's
// local-independence row and submodularity rows, so the cone is unchanged.
// Throws std::runtime_error when no marginal contexts are declared.
ConstraintSystem marginal_cone(const CausalStructure& structure,
                               const std::vector<ConstraintRow>& extra = {},
                               const FmOptions& options = {});

}  // namespace entrocone
