#pragma once

#include "mcr/cli/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcr::cli {

enum ExitCode : int { exit_pass = 0, exit_failure = 1, exit_parse = 2, exit_resource = 3 };

struct ReportRow {
  std::string suite;
  std::string check;
  json params = json::object();
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  /// replaces every tolerance of the scenario
  std::optional<double> tol;
  /// Fock truncation override
  std::optional<int> level;
  /// run only these suites (all when empty)
  std::vector<std::string> suites;
};

struct RunResult {
  std::vector<ReportRow> rows;
  int exit_code = exit_pass;
  std::string error;
};

/// Runs the requested suites in declared order. Never throws for library
/// errors; they are mapped to exit codes with the message in `error`.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

json report_json(const RunResult& result);
std::string report_text(const Scenario& scenario, const RunResult& result);
/// report.json and report.txt in `dir` (created if missing)
void write_reports(const Scenario& scenario, const RunResult& result, const std::string& dir);

struct CheckInfo {
  std::string name;
  std::string statement;
};
struct SuiteInfo {
  std::string name;
  std::string summary;
  std::string parameters;
  std::vector<CheckInfo> checks;
};
const std::vector<SuiteInfo>& suite_catalog();
const SuiteInfo* find_suite(const std::string& name);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace mcr::cli
