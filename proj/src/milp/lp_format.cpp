#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "gadop/milp.hpp"

namespace gadop::milp {

namespace {

std::string sanitize(const std::string& name, const char* prefix, std::size_t index) {
  if (name.empty()) return prefix + std::to_string(index);
  std::string out;
  for (char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '(' ||
                    ch == ')' || ch == ',' || ch == '[' || ch == ']';
    out += ok ? ch : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') out = "_" + out;
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_terms(std::ostream& os, const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  bool first = true;
  for (const auto& [c, name] : terms) {
    if (first) os << ' ' << (c < 0 ? "- " : "") << num(std::abs(c)) << ' ' << name;
    else os << (c < 0 ? " - " : " + ") << num(std::abs(c)) << ' ' << name;
    first = false;
  }
}

}  // namespace

void write_lp(std::ostream& os, const Problem& problem) {
  const auto& vars = problem.variables();
  std::vector<std::string> names;
  names.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) names.push_back(sanitize(vars[j].name, "x", j));

  os << "Minimize\n obj:";
  std::vector<std::pair<double, std::string>> obj;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (vars[j].objective != 0.0) obj.emplace_back(vars[j].objective, names[j]);
  write_terms(os, obj);
  if (problem.objective_offset != 0.0) os << (problem.objective_offset < 0 ? " - " : " + ") << num(std::abs(problem.objective_offset));
  os << "\nSubject To\n";
  const auto& cons = problem.constraints();
  for (std::size_t r = 0; r < cons.size(); ++r) {
    const auto& c = cons[r];
    os << ' ' << sanitize(c.name, "c", r) << ':';
    std::vector<std::pair<double, std::string>> terms;
    for (const auto& t : c.terms) terms.emplace_back(t.coeff, names[static_cast<std::size_t>(t.var)]);
    write_terms(os, terms);
    os << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::Equal ? " = " : " >= ") << num(c.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << names[j] << " free\n";
    } else if (v.lower == v.upper) {
      os << ' ' << names[j] << " = " << num(v.lower) << '\n';
    } else {
      os << ' ' << (v.lower == -kInf ? std::string("-inf") : num(v.lower)) << " <= " << names[j] << " <= "
         << (v.upper == kInf ? std::string("+inf") : num(v.upper)) << '\n';
    }
  }
  bool header = false;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!vars[j].integer) continue;
    if (!header) os << "General\n";
    header = true;
    os << ' ' << names[j] << '\n';
  }
  os << "End\n";
}

}  // namespace gadop::milp
