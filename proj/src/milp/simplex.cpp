#include "milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gadop::milp::detail {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioPivotTol = 1e-7;
constexpr double kResidualTol = 1e-8;
constexpr std::size_t kRefactorInterval = 200;
constexpr int kStallLimit = 40;

}  // namespace

DenseSimplex::DenseSimplex(LpData lp) : lp_(std::move(lp)) {
  m_ = lp_.num_rows();
  n_ = lp_.num_cols;
  cols_ = static_cast<std::size_t>(n_ + m_);
  lo_.resize(cols_);
  hi_.resize(cols_);
  cost_.assign(cols_, 0.0);
  x_.assign(cols_, 0.0);
  state_.assign(cols_, kLower);
  for (int j = 0; j < n_; ++j) {
    const auto u = static_cast<std::size_t>(j);
    lo_[u] = lp_.col_lo[u];
    hi_[u] = lp_.col_hi[u];
    cost_[u] = lp_.cost[u];
    const bool lo_ok = std::isfinite(lo_[u]);
    const bool hi_ok = std::isfinite(hi_[u]);
    if (cost_[u] > 0.0 && lo_ok) {
      state_[u] = kLower;
    } else if (cost_[u] < 0.0 && hi_ok) {
      state_[u] = kUpper;
    } else if (lo_ok) {
      state_[u] = kLower;
    } else if (hi_ok) {
      state_[u] = kUpper;
    } else {
      state_[u] = kFree;
    }
    x_[u] = nonbasic_value(j);
  }
  for (int i = 0; i < m_; ++i) {
    const auto u = static_cast<std::size_t>(n_ + i);
    lo_[u] = lp_.row_lo[static_cast<std::size_t>(i)];
    hi_[u] = lp_.row_hi[static_cast<std::size_t>(i)];
  }
  build_slack_tableau();
  recompute_basics();
  recompute_reduced_costs();
}

void DenseSimplex::build_slack_tableau() {
  tableau_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
  basis_.resize(static_cast<std::size_t>(m_));
  position_.assign(cols_, -1);
  for (int i = 0; i < m_; ++i) {
    double* r = row(i);
    const auto& sr = lp_.rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < sr.idx.size(); ++k) r[sr.idx[k]] -= sr.val[k];
    r[n_ + i] = 1.0;
    basis_[static_cast<std::size_t>(i)] = n_ + i;
    position_[static_cast<std::size_t>(n_ + i)] = i;
    state_[static_cast<std::size_t>(n_ + i)] = kBasic;
  }
  pivots_since_refactor_ = 0;
}

double DenseSimplex::nonbasic_value(int j) const {
  const auto u = static_cast<std::size_t>(j);
  switch (state_[u]) {
    case kLower:
      return lo_[u];
    case kUpper:
      return hi_[u];
    default:
      return 0.0;
  }
}

void DenseSimplex::recompute_basics() {
  std::vector<int> active;
  for (std::size_t j = 0; j < cols_; ++j)
    if (state_[j] != kBasic && x_[j] != 0.0) active.push_back(static_cast<int>(j));
  for (int i = 0; i < m_; ++i) {
    const double* r = row(i);
    double v = 0.0;
    for (int j : active) v -= r[j] * x_[static_cast<std::size_t>(j)];
    x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = v;
  }
}

void DenseSimplex::recompute_reduced_costs() {
  dj_ = cost_;
  for (int i = 0; i < m_; ++i) {
    const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    if (cb == 0.0) continue;
    const double* r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) dj_[j] -= cb * r[j];
  }
  for (int b : basis_) dj_[static_cast<std::size_t>(b)] = 0.0;
}

void DenseSimplex::move_nonbasic(int j, double value) {
  const auto u = static_cast<std::size_t>(j);
  const double delta = value - x_[u];
  if (delta != 0.0) {
    for (int i = 0; i < m_; ++i) {
      const double a = row(i)[j];
      if (a != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= a * delta;
    }
  }
  x_[u] = value;
}

void DenseSimplex::set_bounds(int col, double lo, double hi) {
  const auto u = static_cast<std::size_t>(col);
  lo_[u] = lo;
  hi_[u] = hi;
  if (state_[u] == kBasic) return;
  State s = state_[u];
  if (s == kLower && !std::isfinite(lo)) s = std::isfinite(hi) ? kUpper : kFree;
  if (s == kUpper && !std::isfinite(hi)) s = std::isfinite(lo) ? kLower : kFree;
  if (s == kFree && std::isfinite(lo)) s = kLower;
  if (s == kFree && std::isfinite(hi)) s = kUpper;
  state_[u] = s;
  move_nonbasic(col, nonbasic_value(col));
}

void DenseSimplex::pivot(int p, int q) {
  double* rp = row(p);
  const double inv = 1.0 / rp[q];
  nz_.clear();
  for (std::size_t j = 0; j < cols_; ++j) {
    if (rp[j] != 0.0) {
      rp[j] *= inv;
      nz_.push_back(static_cast<int>(j));
    }
  }
  rp[q] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == p) continue;
    double* ri = row(i);
    const double f = ri[q];
    if (f == 0.0) continue;
    for (int j : nz_) ri[j] -= f * rp[j];
    ri[q] = 0.0;
  }
  const double f = dj_[static_cast<std::size_t>(q)];
  if (f != 0.0) {
    for (int j : nz_) dj_[static_cast<std::size_t>(j)] -= f * rp[j];
  }
  dj_[static_cast<std::size_t>(q)] = 0.0;

  const int leaving = basis_[static_cast<std::size_t>(p)];
  position_[static_cast<std::size_t>(leaving)] = -1;
  basis_[static_cast<std::size_t>(p)] = q;
  position_[static_cast<std::size_t>(q)] = p;
  state_[static_cast<std::size_t>(q)] = kBasic;
  ++pivots_since_refactor_;
}

double DenseSimplex::primal_infeasibility(int i) const {
  const auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
  if (x_[b] < lo_[b] - kPrimalTol) return lo_[b] - x_[b];
  if (x_[b] > hi_[b] + kPrimalTol) return x_[b] - hi_[b];
  return 0.0;
}

int DenseSimplex::choose_entering(const std::vector<double>& dj, int& direction) const {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    const State s = state_[j];
    if (s == kBasic || lo_[j] == hi_[j]) continue;
    const double d = dj[j];
    int dir = 0;
    if ((s == kLower || s == kFree) && d < -kDualTol) dir = 1;
    else if ((s == kUpper || s == kFree) && d > kDualTol) dir = -1;
    if (dir == 0) continue;
    if (bland_) {
      direction = dir;
      return static_cast<int>(j);
    }
    if (std::abs(d) > best_score) {
      best_score = std::abs(d);
      best = static_cast<int>(j);
      direction = dir;
    }
  }
  return best;
}

bool DenseSimplex::make_dual_feasible() {
  for (std::size_t j = 0; j < cols_; ++j) {
    const State s = state_[j];
    if (s == kBasic || lo_[j] == hi_[j]) continue;
    const double d = dj_[j];
    if (s == kLower && d < -kDualTol) {
      if (!std::isfinite(hi_[j])) return false;
      state_[j] = kUpper;
      move_nonbasic(static_cast<int>(j), hi_[j]);
    } else if (s == kUpper && d > kDualTol) {
      if (!std::isfinite(lo_[j])) return false;
      state_[j] = kLower;
      move_nonbasic(static_cast<int>(j), lo_[j]);
    } else if (s == kFree && std::abs(d) > kDualTol) {
      return false;
    }
  }
  return true;
}

std::size_t DenseSimplex::iteration_cap() const { return 200000 + 50 * cols_; }

double DenseSimplex::residual() const {
  double worst = 0.0;
  for (int i = 0; i < m_; ++i) {
    const auto& r = lp_.rows[static_cast<std::size_t>(i)];
    double act = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < r.idx.size(); ++k) {
      const double t = r.val[k] * x_[static_cast<std::size_t>(r.idx[k])];
      act += t;
      scale = std::max(scale, std::abs(t));
    }
    worst = std::max(worst, std::abs(act - x_[static_cast<std::size_t>(n_ + i)]) / scale);
  }
  return worst;
}

bool DenseSimplex::refresh(bool always) {
  if (pivots_since_refactor_ == 0) return false;
  if (!always && residual() <= kResidualTol) return false;
  refactor();
  return true;
}

bool DenseSimplex::maybe_refactor() {
  if (pivots_since_refactor_ < kRefactorInterval) return false;
  refactor();
  return true;
}

void DenseSimplex::refactor() {
  const std::vector<int> target = basis_;
  const std::vector<State> old_state = state_;
  std::vector<char> wanted(cols_, 0);
  for (int b : target) wanted[static_cast<std::size_t>(b)] = 1;

  build_slack_tableau();
  std::fill(dj_.begin(), dj_.end(), 0.0);
  for (int q : target) {
    if (q >= n_ && position_[static_cast<std::size_t>(q)] >= 0) continue;
    int p = -1;
    double best = kPivotTol;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (wanted[static_cast<std::size_t>(b)]) continue;
      const double a = std::abs(row(i)[q]);
      if (a > best) {
        best = a;
        p = i;
      }
    }
    if (p < 0) {
      wanted[static_cast<std::size_t>(q)] = 0;
      continue;
    }
    pivot(p, q);
  }
  for (std::size_t j = 0; j < cols_; ++j) {
    if (position_[j] >= 0) {
      state_[j] = kBasic;
      continue;
    }
    State s = old_state[j];
    if (s == kBasic) {
      // Singular column: park it at the bound nearest its last value.
      if (std::isfinite(lo_[j]) && (!std::isfinite(hi_[j]) || x_[j] - lo_[j] <= hi_[j] - x_[j])) s = kLower;
      else if (std::isfinite(hi_[j])) s = kUpper;
      else s = kFree;
    }
    state_[j] = s;
    x_[j] = nonbasic_value(static_cast<int>(j));
  }
  pivots_since_refactor_ = 0;
  recompute_basics();
  recompute_reduced_costs();
}

LpStatus DenseSimplex::primal() {
  const std::size_t cap = iterations_ + iteration_cap();
  bland_ = false;
  int stall = 0;
  double last = kInfinity;
  std::vector<double> d1(cols_);
  std::vector<double> rate(static_cast<std::size_t>(m_));

  recompute_basics();
  recompute_reduced_costs();
  for (int phase = 1; phase <= 2;) {
    if (iterations_ >= cap) return LpStatus::IterationLimit;
    if (maybe_refactor()) continue;

    const std::vector<double>* dj = &dj_;
    double measure = 0.0;
    if (phase == 1) {
      std::fill(d1.begin(), d1.end(), 0.0);
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        const auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
        double sign = 0.0;
        if (x_[b] < lo_[b] - kPrimalTol) {
          sign = -1.0;
          infeas += lo_[b] - x_[b];
        } else if (x_[b] > hi_[b] + kPrimalTol) {
          sign = 1.0;
          infeas += x_[b] - hi_[b];
        }
        if (sign == 0.0) continue;
        const double* r = row(i);
        for (std::size_t j = 0; j < cols_; ++j)
          if (r[j] != 0.0) d1[j] -= sign * r[j];
      }
      if (infeas == 0.0) {
        phase = 2;
        bland_ = false;
        stall = 0;
        last = kInfinity;
        recompute_reduced_costs();
        continue;
      }
      for (int b : basis_) d1[static_cast<std::size_t>(b)] = 0.0;
      dj = &d1;
      measure = infeas;
    } else {
      measure = objective();
    }

    if (measure < last - 1e-12 * std::max(1.0, std::abs(last))) {
      stall = 0;
      last = measure;
    } else if (++stall > kStallLimit && !bland_) {
      bland_ = true;
      bland_used_ = true;
    }

    int dir = 0;
    const int q = choose_entering(*dj, dir);
    if (q < 0) {
      if (phase == 1) {
        if (refresh(true)) continue;
        return LpStatus::Infeasible;
      }
      recompute_basics();
      bool feasible = true;
      for (int i = 0; i < m_ && feasible; ++i) feasible = primal_infeasibility(i) == 0.0;
      if (!feasible) {
        phase = 1;
        last = kInfinity;
        continue;
      }
      recompute_reduced_costs();
      int dir2 = 0;
      if (choose_entering(dj_, dir2) >= 0) continue;
      if (refresh(false)) continue;
      return LpStatus::Optimal;
    }
    ++iterations_;

    const auto uq = static_cast<std::size_t>(q);
    double step = std::isfinite(lo_[uq]) && std::isfinite(hi_[uq]) ? hi_[uq] - lo_[uq] : kInfinity;
    int leave = -1;
    bool leave_to_upper = false;
    double leave_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = row(i)[q];
      rate[static_cast<std::size_t>(i)] = -a * dir;
      if (std::abs(a) < kRatioPivotTol) continue;
      const double rt = -a * dir;
      const int b = basis_[static_cast<std::size_t>(i)];
      const auto ub = static_cast<std::size_t>(b);
      double limit = kInfinity;
      bool to_upper = false;
      if (x_[ub] < lo_[ub] - kPrimalTol) {
        if (rt > 0.0) limit = (lo_[ub] - x_[ub]) / rt;
      } else if (x_[ub] > hi_[ub] + kPrimalTol) {
        if (rt < 0.0) {
          limit = (hi_[ub] - x_[ub]) / rt;
          to_upper = true;
        }
      } else if (rt > 0.0) {
        if (std::isfinite(hi_[ub])) {
          limit = (hi_[ub] - x_[ub]) / rt;
          to_upper = true;
        }
      } else if (std::isfinite(lo_[ub])) {
        limit = (lo_[ub] - x_[ub]) / rt;
      }
      if (!std::isfinite(limit)) continue;
      limit = std::max(limit, 0.0);
      bool take = false;
      if (limit < step - 1e-12) {
        take = true;
      } else if (leave >= 0 && limit <= step + 1e-12) {
        take = bland_ ? b < basis_[static_cast<std::size_t>(leave)] : std::abs(a) > leave_pivot;
      }
      if (take) {
        leave = i;
        step = std::min(step, limit);
        leave_to_upper = to_upper;
        leave_pivot = std::abs(a);
      }
    }
    if (!std::isfinite(step)) {
      if (refresh(true)) continue;
      return phase == 1 ? LpStatus::Infeasible : LpStatus::Unbounded;
    }

    // Move every basic along the ray.
    if (step > 0.0) {
      for (int i = 0; i < m_; ++i) {
        const double rt = rate[static_cast<std::size_t>(i)];
        if (rt != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] += rt * step;
      }
      x_[uq] += dir * step;
    }
    if (leave < 0) {
      state_[uq] = dir > 0 ? kUpper : kLower;
      x_[uq] = nonbasic_value(q);
      continue;
    }
    const int b = basis_[static_cast<std::size_t>(leave)];
    const auto ub = static_cast<std::size_t>(b);
    const double entering_value = x_[uq];
    pivot(leave, q);
    state_[ub] = leave_to_upper ? kUpper : kLower;
    x_[ub] = nonbasic_value(b);
    x_[uq] = entering_value;
  }
  return LpStatus::Optimal;
}

LpStatus DenseSimplex::dual() {
  recompute_basics();
  if (!make_dual_feasible()) return primal();
  const std::size_t cap = iterations_ + iteration_cap();
  bland_ = false;
  int stall = 0;
  double last = -kInfinity;
  bool verified = false;
  while (true) {
    if (iterations_ >= cap) return LpStatus::IterationLimit;
    if (maybe_refactor()) {
      if (!make_dual_feasible()) return primal();
      continue;
    }
    int p = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double v = primal_infeasibility(i);
      if (v <= 0.0) continue;
      if (bland_) {
        if (p < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(p)]) p = i;
      } else if (v > worst) {
        worst = v;
        p = i;
      }
    }
    if (p < 0) {
      if (verified) {
        if (!refresh(false)) return LpStatus::Optimal;
        if (!make_dual_feasible()) return primal();
        verified = false;
        continue;
      }
      recompute_basics();
      recompute_reduced_costs();
      verified = true;
      int dir = 0;
      if (choose_entering(dj_, dir) >= 0) return primal();
      continue;
    }
    verified = false;
    ++iterations_;

    const double obj = objective();
    if (obj > last + 1e-12 * std::max(1.0, std::abs(last))) {
      last = obj;
      stall = 0;
    } else if (++stall > kStallLimit && !bland_) {
      bland_ = true;
      bland_used_ = true;
    }

    const auto ub = static_cast<std::size_t>(basis_[static_cast<std::size_t>(p)]);
    const bool below = x_[ub] < lo_[ub];
    const double target = below ? lo_[ub] : hi_[ub];
    const double* rp = row(p);
    int q = -1;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const State s = state_[j];
      if (s == kBasic || lo_[j] == hi_[j]) continue;
      const double a = rp[j];
      if (std::abs(a) < kRatioPivotTol) continue;
      // x_b changes by -a per unit increase of x_j.
      bool ok = false;
      if (below) ok = (s == kLower && a < 0.0) || (s == kUpper && a > 0.0) || s == kFree;
      else ok = (s == kLower && a > 0.0) || (s == kUpper && a < 0.0) || s == kFree;
      if (!ok) continue;
      const double ratio = std::abs(dj_[j]) / std::abs(a);
      bool take = false;
      if (ratio < best_ratio - 1e-12) take = true;
      else if (ratio <= best_ratio + 1e-12) take = bland_ ? false : std::abs(a) > best_pivot;
      if (take) {
        best_ratio = ratio;
        best_pivot = std::abs(a);
        q = static_cast<int>(j);
      }
    }
    // Row p looks like an infeasibility proof; phase 1 decides.
    if (q < 0) return primal();

    const auto uq = static_cast<std::size_t>(q);
    const double delta = (x_[ub] - target) / rp[q];
    for (int i = 0; i < m_; ++i) {
      const double a = row(i)[q];
      if (a != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= a * delta;
    }
    x_[uq] += delta;
    const double entering_value = x_[uq];
    const int leaving = static_cast<int>(ub);
    pivot(p, q);
    state_[ub] = below ? kLower : kUpper;
    x_[ub] = nonbasic_value(leaving);
    x_[uq] = entering_value;
  }
}

double DenseSimplex::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return z;
}

std::vector<double> DenseSimplex::structural_values() const {
  return {x_.begin(), x_.begin() + n_};
}

std::vector<double> DenseSimplex::row_duals() const { return {dj_.begin() + n_, dj_.end()}; }

std::vector<double> DenseSimplex::structural_reduced_costs() const {
  return {dj_.begin(), dj_.begin() + n_};
}

}  // namespace gadop::milp::detail
