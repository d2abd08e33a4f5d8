#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "entrocone/rational.hpp"
#include "entrocone/subset.hpp"

namespace entrocone {

enum class Relation { GeqZero, EqZero };

enum class RowOrigin {
  Submodularity,
  Monotonicity,
  WeakMonotonicity,
  Independence,
  DataProcessing,
  User,
  Derived,
};

const char* origin_name(RowOrigin origin);

// sum_i terms[i].second * H(subset of terms[i].first)  REL  0.
// Terms are sorted by coordinate id and hold nonzero coefficients only.
struct ConstraintRow {
  std::vector<std::pair<int, Rat>> terms;
  Relation rel = Relation::GeqZero;
  RowOrigin origin = RowOrigin::User;

  bool trivial() const { return terms.empty(); }
  Rat coeff(int coord) const;
};

// Integer coefficients with gcd 1; terms sorted; equality rows get a
// positive leading coefficient.  Inequality rows are only rescaled (the
// orientation carries meaning).
ConstraintRow canonicalize_row(const ConstraintRow& row);

// Canonical serialization, suitable as a hash key ("=|3:1,5:-2,...").
std::string row_key(const ConstraintRow& row);

// ca * a + cb * b, term-wise.  Relation: EqZero iff both are EqZero.
ConstraintRow combine_rows(const ConstraintRow& a, const Rat& ca,
                           const ConstraintRow& b, const Rat& cb);

Rat dot(const ConstraintRow& row, const std::vector<Rat>& h);

struct ConstraintSystem {
  SubsetIndex index;
  std::vector<ConstraintRow> rows;
};

// Accumulates entropy terms by mask before coordinate binding.
class TermBuilder {
 public:
  // coeff * H(s); the empty set contributes nothing (H(empty) = 0).
  void add_entropy(Mask s, const Rat& coeff);
  // coeff * H(s | t) = coeff * (H(s|t)): H(s u t) - H(t).
  void add_conditional(Mask s, Mask t, const Rat& coeff);
  // coeff * I(a : b | z).
  void add_mutual(Mask a, Mask b, Mask z, const Rat& coeff);

  bool empty() const;
  const std::map<Mask, Rat>& terms() const { return acc_; }
  // True iff every touched subset has a coordinate.
  bool supported(const SubsetIndex& index) const;
  // Throws std::runtime_error naming the missing subset otherwise.
  ConstraintRow to_row(const SubsetIndex& index, Relation rel,
                       RowOrigin origin) const;

 private:
  std::map<Mask, Rat> acc_;
};

// Text form, e.g. "H(A) + H(B) - H(A,B) >= 0" / "... = 0".
std::string row_to_text(const ConstraintRow& row, const SubsetIndex& index);
ConstraintRow row_from_text(const std::string& text, const SubsetIndex& index);

// Machine-readable system dump: coordinate legend then one row per line.
void write_system(std::ostream& out, const ConstraintSystem& system);
ConstraintSystem read_system(std::istream& in);

}  // namespace entrocone
