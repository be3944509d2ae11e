#pragma once

#include <cstddef>
#include <vector>

namespace gadop::milp::detail {

struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;
};

// LP in row-activity form: row_lo <= A x <= row_hi, col_lo <= x <= col_hi.
struct LpData {
  int num_cols = 0;
  std::vector<SparseRow> rows;
  std::vector<double> row_lo, row_hi;
  std::vector<double> col_lo, col_hi, cost;

  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

// Bounded simplex on a dense tableau T = B^-1 [A | -I]. Each row gets a
// logical column equal to its activity, so every constraint is an equality
// with a bounded logical and the initial slack basis is the logicals.
//
// primal() runs phase 1 (sum of infeasibilities) then phase 2; dual()
// re-optimises after bound changes from a dual-feasible basis. Both use
// Dantzig pricing and switch to Bland's rule after a run of
// non-improving iterations, which rules out cycling.
class DenseSimplex {
 public:
  explicit DenseSimplex(LpData lp);

  // Structural column bounds; nonbasic columns are moved to the new bound.
  void set_bounds(int col, double lo, double hi);
  double lower(int col) const { return lo_[static_cast<std::size_t>(col)]; }
  double upper(int col) const { return hi_[static_cast<std::size_t>(col)]; }

  LpStatus primal();
  LpStatus dual();

  double objective() const;
  std::vector<double> structural_values() const;
  std::vector<double> row_duals() const;
  std::vector<double> structural_reduced_costs() const;
  std::size_t iterations() const { return iterations_; }
  bool used_bland() const { return bland_used_; }

  // Rebuilds the tableau for the current basis from the original rows.
  void refactor();

 private:
  enum State : unsigned char { kBasic, kLower, kUpper, kFree };

  double* row(int i) { return tableau_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return tableau_.data() + static_cast<std::size_t>(i) * cols_; }

  void build_slack_tableau();
  void recompute_basics();
  void recompute_reduced_costs();
  double nonbasic_value(int j) const;
  void move_nonbasic(int j, double value);
  void pivot(int p, int q);
  bool make_dual_feasible();
  int choose_entering(const std::vector<double>& dj, int& direction) const;
  double primal_infeasibility(int i) const;
  bool maybe_refactor();
  // Largest scaled gap between a row's activity and its logical.
  double residual() const;
  // Refactors before a terminal verdict: unconditionally when `always`,
  // otherwise only when the tableau has drifted. True if it refactored.
  bool refresh(bool always);
  std::size_t iteration_cap() const;

  LpData lp_;
  int m_ = 0;
  int n_ = 0;
  std::size_t cols_ = 0;  // n_ + m_
  std::vector<double> tableau_;
  std::vector<int> basis_;
  std::vector<int> position_;  // basic row of a column, or -1
  std::vector<State> state_;
  std::vector<double> x_, lo_, hi_, cost_, dj_;
  std::vector<int> nz_;
  std::size_t iterations_ = 0;
  std::size_t pivots_since_refactor_ = 0;
  bool bland_ = false;
  bool bland_used_ = false;
};

}  // namespace gadop::milp::detail
