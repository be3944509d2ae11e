#include <algorithm>
#include <cmath>
#include <string>

#include "gadop/milp.hpp"

namespace gadop::milp {

int Problem::add_variable(double lower, double upper, bool integer, double objective, std::string name) {
  vars_.push_back({lower, upper, integer, objective, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

void Problem::add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name) {
  cons_.push_back({std::move(terms), sense, rhs, std::move(name)});
}

std::vector<std::string> Problem::validate() const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || std::isnan(v.objective)) {
      out.push_back("variable " + std::to_string(j) + ": NaN data");
    } else if (v.lower > v.upper) {
      out.push_back("variable " + std::to_string(j) + ": lower bound exceeds upper bound");
    } else if (v.lower == kInf || v.upper == -kInf) {
      out.push_back("variable " + std::to_string(j) + ": empty domain");
    }
  }
  for (std::size_t r = 0; r < cons_.size(); ++r) {
    const auto& c = cons_[r];
    if (std::isnan(c.rhs) || std::isinf(c.rhs)) out.push_back("constraint " + std::to_string(r) + ": rhs not finite");
    for (const auto& t : c.terms) {
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= vars_.size()) {
        out.push_back("constraint " + std::to_string(r) + ": variable index out of range");
        break;
      }
      if (!std::isfinite(t.coeff)) {
        out.push_back("constraint " + std::to_string(r) + ": coefficient not finite");
        break;
      }
    }
  }
  return out;
}

double Problem::evaluate_objective(const std::vector<double>& x) const {
  double z = objective_offset;
  for (std::size_t j = 0; j < vars_.size(); ++j) z += vars_[j].objective * x[j];
  return z;
}

double Problem::max_scaled_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (const auto& c : cons_) {
    double act = 0.0;
    double scale = 0.0;
    for (const auto& t : c.terms) {
      act += t.coeff * x[static_cast<std::size_t>(t.var)];
      scale = std::max(scale, std::abs(t.coeff));
    }
    if (scale == 0.0) scale = 1.0;
    double viol = 0.0;
    if (c.sense != Sense::GreaterEqual) viol = std::max(viol, act - c.rhs);
    if (c.sense != Sense::LessEqual) viol = std::max(viol, c.rhs - act);
    worst = std::max(worst, viol / scale);
  }
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max(worst, vars_[j].lower - x[j]);
    worst = std::max(worst, x[j] - vars_[j].upper);
  }
  return worst;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "Optimal";
    case Status::Infeasible:
      return "Infeasible";
    case Status::Unbounded:
      return "Unbounded";
    case Status::GapLimit:
      return "GapLimit";
  }
  return "?";
}

const Engine& default_engine() {
  static const BranchAndBoundEngine engine;
  return engine;
}

}  // namespace gadop::milp
