#include "lp_core.hpp"

#include <algorithm>
#include <stdexcept>

namespace entrocone::detail {

FarkasSolver::FarkasSolver(int dim,
                           const std::vector<std::pair<int, Rat>>& target)
    : dim_(dim), target_(target), compact_(static_cast<size_t>(dim), -1) {
  for (const auto& [coord, val] : target_)
    if (val != 0) touch(coord);
}

int FarkasSolver::touch(int coord) {
  if (coord < 0 || coord >= dim_)
    throw std::runtime_error("lp: coordinate out of range");
  int& slot = compact_[static_cast<size_t>(coord)];
  if (slot >= 0) return slot;
  slot = static_cast<int>(used_.size());
  used_.push_back(coord);
  // New equation: sum_j A_kj y_j = b_k with b_k the target coefficient.
  // Coordinates outside the target always enter with b_k = 0.
  Rat b(0);
  for (const auto& [c, val] : target_)
    if (c == coord) b += val;
  const int k = slot;
  const int sign = b < 0 ? -1 : 1;
  basis_.push_back(-(k + 1));
  xb_.push_back(abs(b));
  for (auto& row : binv_) row.push_back(Rat(0));
  binv_.emplace_back(used_.size(), Rat(0));
  binv_.back()[static_cast<size_t>(k)] = Rat(sign);
  // Columns added before this coordinate existed are zero on the new
  // equation, so the block-diagonal extension keeps B^-1 exact.
  return slot;
}

void FarkasSolver::add_row(const LpRow& row) {
  Column col;
  col.row = n_rows_++;
  for (const auto& [coord, val] : row.terms)
    if (val != 0) col.entries.emplace_back(touch(coord), val);
  if (col.entries.empty()) return;
  cols_.push_back(col);
  if (row.equality) {
    Column neg = col;
    neg.sign = -1;
    for (auto& [coord, val] : neg.entries) val = -val;
    cols_.push_back(std::move(neg));
  }
}

FarkasSolver::Status FarkasSolver::solve(long max_pivots) {
  const int d = static_cast<int>(used_.size());
  const int ncols = static_cast<int>(cols_.size());
  std::vector<Rat> u(static_cast<size_t>(d));
  y_.assign(static_cast<size_t>(d), Rat(0));
  long pivots = 0;

  while (true) {
    if (max_pivots > 0 && pivots >= max_pivots) {
      status_ = Status::BudgetHit;
      return status_;
    }
    // Prices y = cB^T B^-1; phase-1 cost is 1 on basic artificials.
    for (int j = 0; j < d; ++j) y_[static_cast<size_t>(j)] = 0;
    for (int k = 0; k < d; ++k) {
      if (basis_[static_cast<size_t>(k)] >= 0) continue;
      if (xb_[static_cast<size_t>(k)] == 0 && !bland_) continue;
      const auto& krow = binv_[static_cast<size_t>(k)];
      for (int j = 0; j < d; ++j) y_[static_cast<size_t>(j)] += krow[static_cast<size_t>(j)];
    }
    // Entering column: reduced cost -y.A_j < 0.
    int enter = -1;
    Rat best(0);
    for (int j = 0; j < ncols; ++j) {
      Rat red(0);
      for (const auto& [coord, val] : cols_[static_cast<size_t>(j)].entries)
        red -= y_[static_cast<size_t>(coord)] * val;
      if (red < 0) {
        if (bland_) {
          enter = j;
          break;
        }
        if (enter < 0 || red < best) {
          enter = j;
          best = red;
        }
      }
    }
    if (enter < 0) {
      // Dropping zero-level artificials from the pricing is only a
      // shortcut; certify optimality against the full phase-1 cost.
      if (!bland_) {
        bool exact = true;
        for (int j = 0; j < d; ++j) y_[static_cast<size_t>(j)] = 0;
        for (int k = 0; k < d; ++k) {
          if (basis_[static_cast<size_t>(k)] >= 0) continue;
          const auto& krow = binv_[static_cast<size_t>(k)];
          for (int j = 0; j < d; ++j)
            y_[static_cast<size_t>(j)] += krow[static_cast<size_t>(j)];
        }
        for (int j = 0; j < ncols && exact; ++j) {
          Rat red(0);
          for (const auto& [coord, val] : cols_[static_cast<size_t>(j)].entries)
            red -= y_[static_cast<size_t>(coord)] * val;
          if (red < 0) exact = false;
        }
        if (!exact) {
          bland_ = true;
          continue;
        }
      }
      break;  // optimal
    }

    // Direction u = B^-1 A_enter.
    for (int k = 0; k < d; ++k) {
      Rat acc(0);
      for (const auto& [coord, val] : cols_[static_cast<size_t>(enter)].entries)
        acc += binv_[static_cast<size_t>(k)][static_cast<size_t>(coord)] * val;
      u[static_cast<size_t>(k)] = acc;
    }
    // Ratio test; prefer kicking artificials out, then lowest basis label.
    int leave = -1;
    Rat theta(0);
    for (int k = 0; k < d; ++k) {
      if (u[static_cast<size_t>(k)] <= 0) continue;
      Rat ratio = xb_[static_cast<size_t>(k)] / u[static_cast<size_t>(k)];
      if (leave < 0 || ratio < theta) {
        leave = k;
        theta = ratio;
      } else if (ratio == theta) {
        const bool cur_art = basis_[static_cast<size_t>(leave)] < 0;
        const bool new_art = basis_[static_cast<size_t>(k)] < 0;
        if (new_art && !cur_art) {
          leave = k;
        } else if (new_art == cur_art &&
                   basis_[static_cast<size_t>(k)] <
                       basis_[static_cast<size_t>(leave)]) {
          leave = k;
        }
      }
    }
    if (leave < 0)
      throw std::runtime_error("lp: unbounded phase-1 direction");

    if (theta == 0) {
      if (++degenerate_run_ > 40) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    // Pivot: scale row `leave`, eliminate from the others.
    const Rat pivot = u[static_cast<size_t>(leave)];
    auto& prow = binv_[static_cast<size_t>(leave)];
    for (int j = 0; j < d; ++j) prow[static_cast<size_t>(j)] /= pivot;
    xb_[static_cast<size_t>(leave)] = theta;
    for (int k = 0; k < d; ++k) {
      if (k == leave || u[static_cast<size_t>(k)] == 0) continue;
      const Rat f = u[static_cast<size_t>(k)];
      auto& krow = binv_[static_cast<size_t>(k)];
      for (int j = 0; j < d; ++j)
        krow[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
      xb_[static_cast<size_t>(k)] -= f * theta;
    }
    basis_[static_cast<size_t>(leave)] = enter;
    ++pivots;
    ++total_pivots_;
  }

  Rat objective(0);
  for (int k = 0; k < d; ++k)
    if (basis_[static_cast<size_t>(k)] < 0) objective += xb_[static_cast<size_t>(k)];
  status_ = objective == 0 ? Status::Feasible : Status::Infeasible;
  return status_;
}

std::vector<Rat> FarkasSolver::multipliers() const {
  if (status_ != Status::Feasible)
    throw std::runtime_error("lp: multipliers need a feasible solve");
  std::vector<Rat> out(static_cast<size_t>(n_rows_), Rat(0));
  const int d = static_cast<int>(used_.size());
  for (int k = 0; k < d; ++k) {
    const int j = basis_[static_cast<size_t>(k)];
    if (j < 0) continue;
    const auto& col = cols_[static_cast<size_t>(j)];
    out[static_cast<size_t>(col.row)] += Rat(col.sign) * xb_[static_cast<size_t>(k)];
  }
  return out;
}

std::vector<Rat> FarkasSolver::witness() const {
  if (status_ != Status::Infeasible)
    throw std::runtime_error("lp: witness needs an infeasible solve");
  std::vector<Rat> h(static_cast<size_t>(dim_), Rat(0));
  for (size_t j = 0; j < used_.size(); ++j)
    h[static_cast<size_t>(used_[j])] = -y_[j];
  return h;
}

FarkasOutcome farkas_membership(const std::vector<LpRow>& rows,
                                const std::vector<std::pair<int, Rat>>& target,
                                int dim, long max_pivots) {
  FarkasSolver solver(dim, target);
  for (const auto& row : rows) solver.add_row(row);
  FarkasOutcome out;
  switch (solver.solve(max_pivots)) {
    case FarkasSolver::Status::BudgetHit:
      out.pivot_budget_hit = true;
      break;
    case FarkasSolver::Status::Feasible:
      out.feasible = true;
      out.multipliers = solver.multipliers();
      break;
    case FarkasSolver::Status::Infeasible:
      out.feasible = false;
      out.h = solver.witness();
      break;
  }
  return out;
}

}  // namespace entrocone::detail
