#pragma once

#include <string>
#include <vector>

#include "entrocone/rational.hpp"
#include "entrocone/row.hpp"
#include "entrocone/verify.hpp"

namespace entrocone {

enum class RelOp { Le, Ge, Eq };

// One parsed entropy term: coeff * H(s), H(s|t), I(s:t) or I(s:t|u);
// variable sets are kept by name until bound to an index.
struct ExprTerm {
  enum class Kind { Entropy, Conditional, Mutual, ConditionalMutual };
  Kind kind = Kind::Entropy;
  Rat coeff = 1;
  std::vector<std::string> s, t, u;
  std::string text() const;
};

// lhs REL rhs.  Homogeneous: constant terms other than 0 are rejected.
struct LinearExpression {
  std::vector<ExprTerm> lhs;
  std::vector<ExprTerm> rhs;
  RelOp rel = RelOp::Le;
  std::string text() const;
};

// Grammar (one inequality):
//   ineq   := sum rel sum
//   rel    := "<=" | ">=" | "="
//   sum    := ["+"|"-"] term (("+"|"-") term)*
//   term   := [rational ["*"]] atom | "0"
//   atom   := "H(" set ")" | "H(" set "|" set ")"
//           | "I(" set ":" set ")" | "I(" set ":" set "|" set ")"
//   set    := name ("," name)*
// Throws ParseError (line 1, column tracked).
LinearExpression parse_inequality(const std::string& text);

// lhs - rhs as mask-keyed entropy coefficients.  Unknown variable names and
// subsets without a coordinate raise std::runtime_error naming the culprit.
ConstraintRow to_row(const LinearExpression& expr, const SubsetIndex& index);

// Candidates in "c . h >= 0" orientation: one for <= / >=, two for =.
std::vector<Candidate> to_candidates(const LinearExpression& expr,
                                     const SubsetIndex& index);

// Slack of the inequality rewritten as "LHS - RHS <= 0": negative satisfied,
// positive violated.  For equalities: |LHS - RHS|.
double eval_slack(const LinearExpression& expr, const SubsetIndex& index,
                  const std::vector<double>& h);

}  // namespace entrocone
