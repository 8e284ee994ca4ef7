#pragma once

#include "mcr/exchange.hpp"
#include "mcr/model.hpp"
#include "mcr/types.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcr::cli {

using json = nlohmann::json;

/// Malformed scenario file (bad JSON, missing field, unknown name).
class ParseError : public Error {
 public:
  using Error::Error;
};

struct SuiteSpec {
  std::string name;
  json params = json::object();
};

struct Scenario {
  int schema = 1;
  std::string name;
  std::vector<double> sites;
  int components = 1;
  int internal_dim = 1;
  int truncation = 4;
  json kernel;
  /// K as given: {"scalar": c} or {"re": [[..]], "im": [[..]]}
  json k_operator;
  std::vector<SuiteSpec> suites;
  std::uint64_t seed = 0;
  Tolerances tolerances;

  DiscreteModel model() const;
};

Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);

/// Kernel family parameters from the scenario's "kernel" object.
KernelSpec parse_kernel(const json& j);
/// s x s matrix; the identity times 0.5 when `j` is null.
Matrix parse_k_operator(const json& j, int internal_dim);

struct FamilyInfo {
  std::string name;
  std::string parameters;
  std::string description;
};
const std::vector<FamilyInfo>& family_catalog();

}  // namespace mcr::cli
