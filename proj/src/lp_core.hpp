#pragma once

// Internal exact rational LP kernel. Decides conic membership
//   c  ==  sum_i lambda_i * row_i   with lambda_i >= 0 on inequality rows,
//                                        lambda_i free on equality rows,
// and produces either the multipliers or a separating vector h with
//   h . row_i >= 0 (== 0 for equality rows) for all i   and   h . c < 0.
// Phase-1 revised simplex over mpq_class with an explicit basis inverse;
// Dantzig pricing with a Bland fallback after a run of degenerate pivots.

#include <utility>
#include <vector>

#include "entrocone/rational.hpp"

namespace entrocone::detail {

struct LpRow {
  std::vector<std::pair<int, Rat>> terms;  // (coordinate, coefficient)
  bool equality = false;
};

struct FarkasOutcome {
  bool feasible = false;
  std::vector<Rat> multipliers;  // per input row, when feasible
  std::vector<Rat> h;            // dense separating vector, when infeasible
  bool pivot_budget_hit = false;
};

// Incremental membership solver: rows may be appended between solve() calls
// and the simplex resumes from the previous basis, so a cutting-plane loop
// pays only for the pivots the new rows cause.  Coordinates are compacted
// lazily; a coordinate first seen after construction enters with a zero
// right-hand side (the target is fixed at construction).
class FarkasSolver {
 public:
  enum class Status { Feasible, Infeasible, BudgetHit };

  FarkasSolver(int dim, const std::vector<std::pair<int, Rat>>& target);

  void add_row(const LpRow& row);
  int row_count() const { return n_rows_; }
  int equation_count() const { return static_cast<int>(used_.size()); }
  long pivot_count() const { return total_pivots_; }

  // Runs/resumes the simplex.  max_pivots == 0 means unlimited (counted per
  // call, not cumulatively).
  Status solve(long max_pivots = 0);

  // After Feasible: multiplier per added row, in add order.
  std::vector<Rat> multipliers() const;
  // After Infeasible: dense separating vector over the full dim.
  std::vector<Rat> witness() const;

 private:
  struct Column {
    std::vector<std::pair<int, Rat>> entries;  // compact coordinate -> coeff
    int row = -1;                              // originating input row
    int sign = 1;                              // -1 for an equality mirror
  };

  int touch(int coord);

  int dim_ = 0;
  int n_rows_ = 0;
  std::vector<std::pair<int, Rat>> target_;
  std::vector<int> compact_;  // dense coord -> compact id (-1 when unused)
  std::vector<int> used_;     // compact id -> dense coord
  std::vector<Column> cols_;
  // One equation per compact coordinate.
  std::vector<int> basis_;    // >= 0: column index; -(k+1): artificial k
  std::vector<Rat> xb_;
  std::vector<std::vector<Rat>> binv_;
  std::vector<Rat> y_;        // last phase-1 prices (valid after solve)
  long degenerate_run_ = 0;
  bool bland_ = false;
  long total_pivots_ = 0;
  Status status_ = Status::BudgetHit;
};

// dim bounds the coordinate indices. max_pivots == 0 means unlimited; when
// the budget is hit the outcome reports infeasible=false-like data: callers
// must treat pivot_budget_hit as "unknown" (the returned fields are empty).
FarkasOutcome farkas_membership(const std::vector<LpRow>& rows,
                                const std::vector<std::pair<int, Rat>>& target,
                                int dim, long max_pivots = 0);

}  // namespace entrocone::detail
