#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>

#include "gadop/errors.hpp"
#include "gadop/milp.hpp"
#include "milp/presolve.hpp"
#include "milp/simplex.hpp"

namespace gadop::milp {

namespace {

using detail::DenseSimplex;
using detail::LpStatus;

struct BoundChange {
  int col = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct Node {
  std::vector<BoundChange> path;
  double bound = -kInf;
  std::size_t id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_problem(const Problem& problem) {
  const auto issues = problem.validate();
  if (!issues.empty()) throw std::invalid_argument("malformed MILP: " + issues.front());
}

LpStatus run(DenseSimplex& lp, bool warm) {
  LpStatus s = warm ? lp.dual() : lp.primal();
  if (s == LpStatus::IterationLimit) {
    lp.refactor();
    s = lp.primal();
  }
  if (s == LpStatus::IterationLimit) throw SolverFailure("simplex iteration limit reached");
  return s;
}

}  // namespace

Solution solve(const Problem& problem, const Limits& limits) {
  const auto t0 = std::chrono::steady_clock::now();
  check_problem(problem);
  Solution sol;
  const detail::Reduced red = detail::presolve(problem, true, true);
  if (red.infeasible) {
    sol.status = Status::Infeasible;
    sol.wall_time_s = seconds_since(t0);
    return sol;
  }

  DenseSimplex lp(red.lp);
  const std::size_t ncols = red.col_to_var.size();
  std::vector<double> lp_lo = red.lp.col_lo;
  std::vector<double> lp_hi = red.lp.col_hi;

  double incumbent = kInf;
  std::vector<double> best;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 1;
  std::optional<Node> current = Node{};
  bool first = true;
  bool limit_hit = false;
  const double gap = limits.abs_gap;

  while (true) {
    if (!current) {
      if (open.empty()) break;
      if (open.top().bound >= incumbent - gap) {
        open = {};
        break;
      }
      current = open.top();
      open.pop();
    }
    if (sol.nodes_explored >= limits.node_cap || seconds_since(t0) > limits.time_cap_s) {
      open.push(*current);
      current.reset();
      limit_hit = true;
      break;
    }
    ++sol.nodes_explored;

    std::vector<double> lo = red.lp.col_lo;
    std::vector<double> hi = red.lp.col_hi;
    bool ok = true;
    for (const auto& c : current->path) {
      const auto u = static_cast<std::size_t>(c.col);
      lo[u] = std::max(lo[u], c.lo);
      hi[u] = std::min(hi[u], c.hi);
      if (lo[u] > hi[u]) ok = false;
    }
    if (ok && !current->path.empty()) ok = detail::propagate(red.lp, red.col_integer, lo, hi, 5);
    if (!ok) {
      current.reset();
      continue;
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      if (lo[j] != lp_lo[j] || hi[j] != lp_hi[j]) {
        lp.set_bounds(static_cast<int>(j), lo[j], hi[j]);
        lp_lo[j] = lo[j];
        lp_hi[j] = hi[j];
      }
    }
    const LpStatus s = run(lp, !first);
    if (first && s == LpStatus::Unbounded) {
      sol.status = Status::Unbounded;
      sol.simplex_iterations = lp.iterations();
      sol.wall_time_s = seconds_since(t0);
      return sol;
    }
    first = false;
    if (s != LpStatus::Optimal) {
      current.reset();
      continue;
    }
    const double obj = lp.objective() + red.objective_offset;
    if (obj >= incumbent - gap) {
      current.reset();
      continue;
    }
    const std::vector<double> x = lp.structural_values();

    int branch = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!red.col_integer[j]) continue;
      const double f = x[j] - std::floor(x[j]);
      const double score = std::min(f, 1.0 - f);
      if (score > kIntegralityTol && score > best_score + 1e-12) {
        best_score = score;
        branch = static_cast<int>(j);
      }
    }

    if (branch < 0) {
      std::vector<double> cand = x;
      for (std::size_t j = 0; j < ncols; ++j)
        if (red.col_integer[j]) cand[j] = std::round(cand[j]);
      std::vector<double> full = detail::expand(red, cand);
      if (problem.max_scaled_violation(full) > 1e-6) full = detail::expand(red, x);
      if (problem.max_scaled_violation(full) <= 1e-6) {
        const double z = problem.evaluate_objective(full);
        if (z < incumbent) {
          incumbent = z;
          best = std::move(full);
        }
      }
      current.reset();
      continue;
    }

    const auto ub = static_cast<std::size_t>(branch);
    const double v = x[ub];
    Node down{current->path, obj, next_id++};
    down.path.push_back({branch, lo[ub], std::floor(v)});
    Node up{current->path, obj, next_id++};
    up.path.push_back({branch, std::ceil(v), hi[ub]});
    if (v - std::floor(v) > 0.5) {
      open.push(std::move(down));
      current = std::move(up);
    } else {
      open.push(std::move(up));
      current = std::move(down);
    }
  }

  sol.simplex_iterations = lp.iterations();
  sol.wall_time_s = seconds_since(t0);
  double bound = incumbent;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  if (best.empty()) {
    sol.status = limit_hit ? Status::GapLimit : Status::Infeasible;
    sol.best_bound = limit_hit ? bound : kInf;
    return sol;
  }
  sol.values = std::move(best);
  sol.objective = incumbent;
  sol.best_bound = std::min(bound, incumbent);
  sol.status = limit_hit && sol.best_bound < incumbent - gap ? Status::GapLimit : Status::Optimal;
  return sol;
}

Solution solve_lp_relaxation(const Problem& problem) {
  const auto t0 = std::chrono::steady_clock::now();
  check_problem(problem);
  const detail::Reduced red = detail::presolve(problem, false, false);
  DenseSimplex lp(red.lp);
  Solution sol;
  const LpStatus s = run(lp, false);
  sol.simplex_iterations = lp.iterations();
  sol.nodes_explored = 1;
  sol.wall_time_s = seconds_since(t0);
  if (s == LpStatus::Infeasible) {
    sol.status = Status::Infeasible;
    return sol;
  }
  if (s == LpStatus::Unbounded) {
    sol.status = Status::Unbounded;
    sol.objective = -kInf;
    return sol;
  }
  sol.status = Status::Optimal;
  sol.values = detail::expand(red, lp.structural_values());
  sol.objective = problem.evaluate_objective(sol.values);
  sol.best_bound = sol.objective;
  const auto y = lp.row_duals();
  sol.duals.assign(problem.num_constraints(), 0.0);
  for (std::size_t r = 0; r < red.row_to_con.size(); ++r) {
    sol.duals[static_cast<std::size_t>(red.row_to_con[r])] = y[r] / red.row_scale[r];
  }
  sol.reduced_costs = lp.structural_reduced_costs();
  return sol;
}

}  // namespace gadop::milp
