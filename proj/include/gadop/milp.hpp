#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace gadop::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility tolerance on constraints after dividing each row by its
// largest coefficient, and integrality tolerance.
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  int var = 0;
  double coeff = 0.0;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  double objective = 0.0;
  std::string name;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

// Minimisation problem over bounded (possibly integer) variables.
class Problem {
 public:
  int add_variable(double lower, double upper, bool integer, double objective, std::string name = {});
  int add_binary(double objective, std::string name = {}) { return add_variable(0.0, 1.0, true, objective, std::move(name)); }
  int add_continuous(double lower, double upper, double objective, std::string name = {}) {
    return add_variable(lower, upper, false, objective, std::move(name));
  }
  void add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});
  void add_objective(int var, double coeff) { vars_.at(static_cast<std::size_t>(var)).objective += coeff; }

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_constraints() const { return cons_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  Variable& variable(int v) { return vars_.at(static_cast<std::size_t>(v)); }
  const Variable& variable(int v) const { return vars_.at(static_cast<std::size_t>(v)); }

  double objective_offset = 0.0;

  // Human-readable problems with the problem data; empty when well formed.
  std::vector<std::string> validate() const;

  double evaluate_objective(const std::vector<double>& x) const;
  // Largest row violation of `x`, each row divided by its largest |coeff|.
  double max_scaled_violation(const std::vector<double>& x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
};

enum class Status { Optimal, Infeasible, Unbounded, GapLimit };

const char* to_string(Status s);

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective = kInf;
  double best_bound = -kInf;
  std::size_t nodes_explored = 0;
  std::size_t simplex_iterations = 0;
  double wall_time_s = 0.0;
  // LP relaxations only: one dual per constraint and one reduced cost per variable.
  std::vector<double> duals;
  std::vector<double> reduced_costs;

  bool has_solution() const { return !values.empty(); }
};

struct Limits {
  std::size_t node_cap = 5'000'000;
  double time_cap_s = kInf;
  double abs_gap = 1e-6;
};

// Branch-and-bound over the bounded primal/dual simplex. Deterministic for a
// given problem and limits unless the time cap is reached.
Solution solve(const Problem& problem, const Limits& limits = {});

// Optimal basic solution of the continuous relaxation by primal simplex.
Solution solve_lp_relaxation(const Problem& problem);

// Seam for substituting an external MILP engine behind the model builders.
class Engine {
 public:
  virtual ~Engine() = default;
  virtual Solution solve(const Problem& problem, const Limits& limits) const = 0;
  virtual std::string name() const = 0;
};

class BranchAndBoundEngine final : public Engine {
 public:
  Solution solve(const Problem& problem, const Limits& limits) const override { return milp::solve(problem, limits); }
  std::string name() const override { return "builtin-branch-and-bound"; }
};

const Engine& default_engine();

// CPLEX LP text format; see docs/formats.md for the exact layout.
void write_lp(std::ostream& os, const Problem& problem);

}  // namespace gadop::milp
