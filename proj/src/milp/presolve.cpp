#include "milp/presolve.hpp"

#include <algorithm>
#include <cmath>

namespace gadop::milp::detail {

namespace {

constexpr double kTol = 1e-9;

struct Activity {
  double min = 0.0, max = 0.0;
  int min_inf = 0, max_inf = 0;
};

Activity activity(const SparseRow& r, const std::vector<double>& lo, const std::vector<double>& hi) {
  Activity a;
  for (std::size_t k = 0; k < r.idx.size(); ++k) {
    const auto j = static_cast<std::size_t>(r.idx[k]);
    const double c = r.val[k];
    const double lo_part = c > 0.0 ? lo[j] : hi[j];
    const double hi_part = c > 0.0 ? hi[j] : lo[j];
    if (std::isfinite(lo_part)) a.min += c * lo_part;
    else ++a.min_inf;
    if (std::isfinite(hi_part)) a.max += c * hi_part;
    else ++a.max_inf;
  }
  return a;
}

bool tighten(std::size_t j, bool integer, double new_lo, double new_hi, std::vector<double>& lo,
             std::vector<double>& hi, bool& changed) {
  if (integer) {
    new_lo = std::ceil(new_lo - 1e-6);
    new_hi = std::floor(new_hi + 1e-6);
  }
  const double span = std::isfinite(hi[j] - lo[j]) ? hi[j] - lo[j] : kInf;
  const double min_gain = integer ? 0.5 : std::max(1e-7, 1e-3 * std::min(span, 1e6));
  if (new_lo > lo[j] + min_gain) {
    lo[j] = new_lo;
    changed = true;
  }
  if (new_hi < hi[j] - min_gain) {
    hi[j] = new_hi;
    changed = true;
  }
  if (lo[j] > hi[j]) {
    if (lo[j] > hi[j] + 1e-7) return false;
    hi[j] = lo[j];
  }
  return true;
}

}  // namespace

bool propagate(const LpData& lp, const std::vector<char>& integer, std::vector<double>& lo, std::vector<double>& hi,
               int max_passes) {
  for (int pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (int i = 0; i < lp.num_rows(); ++i) {
      const auto& r = lp.rows[static_cast<std::size_t>(i)];
      const double rlo = lp.row_lo[static_cast<std::size_t>(i)];
      const double rhi = lp.row_hi[static_cast<std::size_t>(i)];
      const Activity a = activity(r, lo, hi);
      if (a.min_inf == 0 && a.min > rhi + 1e-7 * std::max(1.0, std::abs(rhi))) return false;
      if (a.max_inf == 0 && a.max < rlo - 1e-7 * std::max(1.0, std::abs(rlo))) return false;
      for (std::size_t k = 0; k < r.idx.size(); ++k) {
        const auto j = static_cast<std::size_t>(r.idx[k]);
        const double c = r.val[k];
        const double own_min = c > 0.0 ? c * lo[j] : c * hi[j];
        const double own_max = c > 0.0 ? c * hi[j] : c * lo[j];
        double new_lo = -kInf;
        double new_hi = kInf;
        if (std::isfinite(rhi)) {
          int inf = a.min_inf - (std::isfinite(own_min) ? 0 : 1);
          if (inf == 0) {
            const double rest = a.min - (std::isfinite(own_min) ? own_min : 0.0);
            const double bound = (rhi - rest) / c;
            if (c > 0.0) new_hi = std::min(new_hi, bound);
            else new_lo = std::max(new_lo, bound);
          }
        }
        if (std::isfinite(rlo)) {
          int inf = a.max_inf - (std::isfinite(own_max) ? 0 : 1);
          if (inf == 0) {
            const double rest = a.max - (std::isfinite(own_max) ? own_max : 0.0);
            const double bound = (rlo - rest) / c;
            if (c > 0.0) new_lo = std::max(new_lo, bound);
            else new_hi = std::min(new_hi, bound);
          }
        }
        bool local = false;
        if (!tighten(j, integer[j] != 0, new_lo, new_hi, lo, hi, local)) return false;
        if (local) {
          changed = true;
          // Later terms of this row use the new bound through a fresh activity.
          break;
        }
      }
    }
    if (!changed) break;
  }
  return true;
}

Reduced presolve(const Problem& problem, bool integral, bool reduce) {
  Reduced red;
  const auto& vars = problem.variables();
  const auto& cons = problem.constraints();
  const std::size_t n = vars.size();

  LpData full;
  full.num_cols = static_cast<int>(n);
  std::vector<char> integer(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    full.col_lo.push_back(vars[j].lower);
    full.col_hi.push_back(vars[j].upper);
    full.cost.push_back(vars[j].objective);
    integer[j] = integral && vars[j].integer;
    if (integer[j]) {
      full.col_lo[j] = std::ceil(full.col_lo[j] - 1e-6);
      full.col_hi[j] = std::floor(full.col_hi[j] + 1e-6);
      if (full.col_lo[j] > full.col_hi[j]) red.infeasible = true;
    }
  }
  for (const auto& c : cons) {
    // Merge duplicate terms.
    std::vector<std::pair<int, double>> t;
    for (const auto& term : c.terms) t.emplace_back(term.var, term.coeff);
    std::sort(t.begin(), t.end(), [](auto& a, auto& b) { return a.first < b.first; });
    SparseRow r;
    for (const auto& [v, coeff] : t) {
      if (!r.idx.empty() && r.idx.back() == v) r.val.back() += coeff;
      else {
        r.idx.push_back(v);
        r.val.push_back(coeff);
      }
    }
    SparseRow clean;
    for (std::size_t k = 0; k < r.idx.size(); ++k) {
      if (r.val[k] != 0.0) {
        clean.idx.push_back(r.idx[k]);
        clean.val.push_back(r.val[k]);
      }
    }
    full.rows.push_back(std::move(clean));
    full.row_lo.push_back(c.sense == Sense::LessEqual ? -kInf : c.rhs);
    full.row_hi.push_back(c.sense == Sense::GreaterEqual ? kInf : c.rhs);
  }

  std::vector<double> lo = full.col_lo;
  std::vector<double> hi = full.col_hi;
  std::vector<char> keep_row(cons.size(), 1);
  if (reduce && !red.infeasible) {
    if (!propagate(full, integer, lo, hi, 20)) red.infeasible = true;
    for (std::size_t i = 0; i < cons.size() && !red.infeasible; ++i) {
      const Activity a = activity(full.rows[i], lo, hi);
      const double rlo = full.row_lo[i];
      const double rhi = full.row_hi[i];
      const bool lo_ok = !std::isfinite(rlo) || (a.min_inf == 0 && a.min >= rlo - kTol * std::max(1.0, std::abs(rlo)));
      const bool hi_ok = !std::isfinite(rhi) || (a.max_inf == 0 && a.max <= rhi + kTol * std::max(1.0, std::abs(rhi)));
      if (lo_ok && hi_ok) keep_row[i] = 0;
    }
  }

  red.var_to_col.assign(n, -1);
  red.fixed_value.assign(n, 0.0);
  red.objective_offset = problem.objective_offset;
  for (std::size_t j = 0; j < n; ++j) {
    const bool fixed = reduce && lo[j] == hi[j];
    if (fixed) {
      red.fixed_value[j] = lo[j];
      red.objective_offset += vars[j].objective * lo[j];
      continue;
    }
    red.var_to_col[j] = static_cast<int>(red.col_to_var.size());
    red.col_to_var.push_back(static_cast<int>(j));
    red.col_integer.push_back(integer[j]);
    red.lp.col_lo.push_back(lo[j]);
    red.lp.col_hi.push_back(hi[j]);
    red.lp.cost.push_back(vars[j].objective);
  }
  red.lp.num_cols = static_cast<int>(red.col_to_var.size());

  for (std::size_t i = 0; i < cons.size() && !red.infeasible; ++i) {
    if (!keep_row[i]) continue;
    SparseRow r;
    double shift = 0.0;
    double scale = 0.0;
    const auto& src = full.rows[i];
    for (std::size_t k = 0; k < src.idx.size(); ++k) {
      const auto j = static_cast<std::size_t>(src.idx[k]);
      if (red.var_to_col[j] < 0) {
        shift += src.val[k] * red.fixed_value[j];
        continue;
      }
      r.idx.push_back(red.var_to_col[j]);
      r.val.push_back(src.val[k]);
      scale = std::max(scale, std::abs(src.val[k]));
    }
    double rlo = full.row_lo[i] - shift;
    double rhi = full.row_hi[i] - shift;
    if (r.idx.empty() && reduce) {
      if (rlo > 1e-7 * std::max(1.0, std::abs(rlo)) || rhi < -1e-7 * std::max(1.0, std::abs(rhi))) red.infeasible = true;
      continue;
    }
    if (scale == 0.0) scale = 1.0;
    for (double& v : r.val) v /= scale;
    red.lp.rows.push_back(std::move(r));
    red.lp.row_lo.push_back(rlo / scale);
    red.lp.row_hi.push_back(rhi / scale);
    red.row_to_con.push_back(static_cast<int>(i));
    red.row_scale.push_back(scale);
  }
  return red;
}

std::vector<double> expand(const Reduced& red, const std::vector<double>& cols) {
  std::vector<double> x(red.var_to_col.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int c = red.var_to_col[j];
    x[j] = c < 0 ? red.fixed_value[j] : cols[static_cast<std::size_t>(c)];
  }
  return x;
}

}  // namespace gadop::milp::detail
