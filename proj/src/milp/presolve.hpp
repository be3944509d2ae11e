#pragma once

#include <vector>

#include "gadop/milp.hpp"
#include "milp/simplex.hpp"

namespace gadop::milp::detail {

// Problem after presolve. Removed variables are fixed at `fixed_value`;
// remaining columns keep the original variable order.
struct Reduced {
  LpData lp;
  std::vector<int> col_to_var;
  std::vector<int> var_to_col;  // -1 when the variable was fixed and removed
  std::vector<double> fixed_value;
  std::vector<char> col_integer;
  std::vector<int> row_to_con;
  std::vector<double> row_scale;  // reduced row = original row / row_scale
  double objective_offset = 0.0;
  bool infeasible = false;
};

// With `reduce` false only the row scaling is applied, so every variable and
// constraint survives and duals map back one-to-one.
Reduced presolve(const Problem& problem, bool integral, bool reduce);

// Activity-based bound tightening over the rows of `lp`; integer columns are
// rounded inward. Returns false when some row or bound becomes infeasible.
bool propagate(const LpData& lp, const std::vector<char>& integer, std::vector<double>& lo, std::vector<double>& hi,
               int max_passes);

std::vector<double> expand(const Reduced& red, const std::vector<double>& cols);

}  // namespace gadop::milp::detail
