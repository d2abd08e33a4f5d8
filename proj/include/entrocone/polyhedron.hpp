#pragma once

#include <iosfwd>
#include <vector>

#include "entrocone/row.hpp"

namespace entrocone {

// Primitive integer direction over the index coordinates.
struct Ray {
  std::vector<Int> coords;
};

struct ConeVRep {
  SubsetIndex index;
  std::vector<Ray> rays;
  // Basis of the lineality space, empty for pointed cones.
  std::vector<Ray> lineality;
};

struct FmOptions {
  // Exact-LP pruning after every eliminated coordinate.
  bool lp_prune = true;
  // Working-set growth budget per implication probe while pruning
  // intermediate systems (0 = unlimited).  The final system is always
  // minimized without a budget.
  int prune_rounds_budget = 6;
  // Minimize the final system (unique facet list for full-dimensional cones).
  bool final_minimize = true;
};

// Exact projection: drops the given coordinates.  Equality rows are used for
// Gaussian substitution first; the rest is Fourier-Motzkin elimination with a
// greedy (#positive x #negative) coordinate order, syntactic deduplication,
// history filtering, and LP-based redundancy removal.
ConstraintSystem fm_eliminate(const ConstraintSystem& system,
                              const std::vector<int>& drop,
                              const FmOptions& options = {});

// Keeps exactly the rows not implied by the others (for full-dimensional
// cones: the unique facet list plus any independent equalities).
ConstraintSystem remove_redundant(const ConstraintSystem& system);

// True iff the two systems describe the same cone (mutual row implication).
bool same_cone(const ConstraintSystem& a, const ConstraintSystem& b);

// Double description: extreme rays of {h : rows(h)}, canonically ordered,
// primitive integer coordinates; lineality space reported separately.
ConeVRep extreme_rays(const ConstraintSystem& system);

// Dual direction: minimal H-representation of the cone generated by the rays
// (plus +-lineality).  Facets come out as GeqZero rows, the affine hull of a
// non-full-dimensional cone as EqZero rows.
ConstraintSystem hrep_from_vrep(const ConeVRep& vrep);

// Text formats (PORTA-flavoured, with a coordinate legend).
void write_ieq(std::ostream& out, const ConstraintSystem& system);
ConstraintSystem read_ieq(std::istream& in);
void write_poi(std::ostream& out, const ConeVRep& vrep);
ConeVRep read_poi(std::istream& in);

}  // namespace entrocone
