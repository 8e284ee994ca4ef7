#include "mcr/report.hpp"

#include <algorithm>
#include <cmath>

namespace mcr {

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

void ValidationReport::add(std::string name, double residual, double tolerance,
                           std::optional<Counterexample> where) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = residual;
  c.tolerance = tolerance;
  c.pass = std::isfinite(residual) && residual <= tolerance;
  if (!c.pass) c.counterexample = std::move(where);
  checks.push_back(std::move(c));
}

void ValidationReport::append(const ValidationReport& other, const std::string& prefix) {
  for (CheckResult c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
  if (!kappa) kappa = other.kappa;
}

void ResidualTracker::observe(double residual, const std::vector<double>& sites, int row,
                              int col) {
  if (!std::isfinite(residual)) residual = INFINITY;
  if (!where_ || residual > max_) {
    max_ = residual;
    where_ = Counterexample{sites, row, col};
  }
}

}  // namespace mcr
