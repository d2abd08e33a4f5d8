#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entrocone/row.hpp"

namespace entrocone {

// The claim "c . h >= 0 for every h in the cone of the system".
struct Candidate {
  std::vector<std::pair<int, Rat>> terms;
};

Candidate candidate_from_row(const ConstraintRow& row);

struct Certificate {
  enum class Verdict { Valid, NotImplied };
  Verdict verdict = Verdict::NotImplied;
  // Valid: candidate = sum multipliers[i] * row_i with multipliers
  // nonnegative on inequality rows (free on equality rows).  Sparse over
  // system row ids.
  std::vector<std::pair<int, Rat>> multipliers;
  // NotImplied: a ray of the cone with candidate . witness < 0, dense over
  // the system's coordinates.
  std::vector<Rat> witness;

  bool valid() const { return verdict == Verdict::Valid; }
};

struct VerifyOptions {
  // Bound on working-set growth rounds; 0 = unlimited.  When the budget is
  // exhausted the verdict is NotImplied-unproven and budget_exhausted is set.
  int max_rounds = 0;
  int max_new_rows_per_round = 256;
  // Universe permutations (perm[old bit] = new bit) believed to map the
  // system onto itself, e.g. from structure_automorphisms.  Permutations
  // that fail to fix the candidate or to permute the coordinate and row
  // sets are dropped after an exact check; the survivors quotient the
  // search space by symmetry without changing the verdict, and the
  // certificate is expanded back to plain system rows.
  std::vector<std::vector<int>> symmetry;
};

struct VerifyResult {
  Certificate certificate;
  bool budget_exhausted = false;
};

// Exact Farkas decision: either produces multipliers or a violating ray.
VerifyResult is_valid_ex(const ConstraintSystem& system,
                         const Candidate& candidate,
                         const VerifyOptions& options = {});
Certificate is_valid(const ConstraintSystem& system, const Candidate& candidate);

// Re-derives the verdict from the certificate alone, exactly.
bool replay(const ConstraintSystem& system, const Candidate& candidate,
            const Certificate& certificate);

void write_certificate(std::ostream& out, const ConstraintSystem& system,
                       const Candidate& candidate,
                       const Certificate& certificate);
Certificate read_certificate(std::istream& in);

}  // namespace entrocone
