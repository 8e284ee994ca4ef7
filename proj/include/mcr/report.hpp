#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mcr {

/// Where a check found its largest residual.
struct Counterexample {
  std::vector<double> sites;
  int row = -1;
  int col = -1;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::optional<Counterexample> counterexample;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::optional<double> kappa;

  bool all_pass() const;
  /// nullptr when no check with that name exists
  const CheckResult* find(const std::string& name) const;
  void add(std::string name, double residual, double tolerance,
           std::optional<Counterexample> where = std::nullopt);
  void append(const ValidationReport& other, const std::string& prefix = "");
};

/// Running maximum of a residual together with where it occurred.
class ResidualTracker {
 public:
  void observe(double residual, const std::vector<double>& sites = {}, int row = -1, int col = -1);
  double max() const { return max_; }
  std::optional<Counterexample> where() const { return where_; }

 private:
  double max_ = 0.0;
  std::optional<Counterexample> where_;
};

}  // namespace mcr
