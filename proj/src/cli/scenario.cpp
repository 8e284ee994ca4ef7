#include "mcr/cli/scenario.hpp"

#include "mcr/phase.hpp"

#include <fstream>
#include <sstream>

namespace mcr::cli {

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

PhaseFn phase(const json& j, const std::string& where) {
  if (j.is_number()) return PhaseFn::constant(j.get<double>());
  if (!j.is_string()) throw ParseError(where + ": phase must be a string or number");
  try {
    return PhaseFn::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

PhaseFn phase_field(const json& j, const char* key) {
  return phase(require(j, key, "kernel"), std::string("kernel.") + key);
}

std::vector<std::vector<PhaseFn>> phase_table(const json& j) {
  const json& t = require(j, "q", "kernel");
  if (!t.is_array() || t.empty()) throw ParseError("kernel.q: expected a square table");
  std::vector<std::vector<PhaseFn>> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i].is_array() || t[i].size() != t.size())
      throw ParseError("kernel.q: expected a square table");
    std::vector<PhaseFn> row;
    for (std::size_t k = 0; k < t.size(); ++k)
      row.push_back(phase(t[i][k], "kernel.q[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix complex_matrix(const json& j, const std::string& where) {
  const json& re = require(j, "re", where);
  if (!re.is_array() || re.empty()) throw ParseError(where + ".re: expected a matrix");
  const auto rows = re.size(), cols = re[0].size();
  const json im = j.contains("im") ? j.at("im") : json();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  try {
    for (std::size_t i = 0; i < rows; ++i) {
      if (re[i].size() != cols) throw ParseError(where + ".re: ragged matrix");
      for (std::size_t k = 0; k < cols; ++k) {
        const double x = re[i][k].get<double>();
        const double y = im.is_null() ? 0.0 : im.at(i).at(k).get<double>();
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cplx{x, y};
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  return m;
}

}  // namespace

DiscreteModel Scenario::model() const {
  return DiscreteModel(sites, components, internal_dim, truncation);
}

KernelSpec parse_kernel(const json& j) {
  const auto family = get<std::string>(j, "family", "kernel");
  if (family == "abelian") return AbelianSpec{phase_field(j, "q")};
  if (family == "lifted") return LiftedSpec{phase_table(j)};
  if (family == "opposite_type") {
    auto theta = get<std::vector<int>>(j, "theta", "kernel");
    return OppositeTypeSpec{std::move(theta), phase_table(j)};
  }
  if (family == "two_component") return TwoComponentSpec{phase_field(j, "q1"), phase_field(j, "q2")};
  if (family == "three_component")
    return ThreeComponentSpec{phase_field(j, "q1"), phase_field(j, "q2"), phase_field(j, "q3"),
                              phase_field(j, "q4")};
  if (family == "fused")
    return FusedSpec{{phase_field(j, "q1"), phase_field(j, "q2")}, get<int>(j, "k", "kernel")};
  if (family == "tabulated") {
    TabulatedSpec spec{get<int>(j, "components", "kernel"), {}};
    const json& entries = require(j, "entries", "kernel");
    if (!entries.is_array()) throw ParseError("kernel.entries: expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string where = "kernel.entries[" + std::to_string(i) + "]";
      spec.entries.push_back({get<double>(entries[i], "y1", where),
                              get<double>(entries[i], "y2", where),
                              complex_matrix(entries[i], where)});
    }
    return spec;
  }
  throw ParseError("kernel.family: unknown family \"" + family + "\"");
}

Matrix parse_k_operator(const json& j, int internal_dim) {
  const Matrix id = Matrix::Identity(internal_dim, internal_dim);
  if (j.is_null()) return 0.5 * id;
  if (j.is_number()) return j.get<double>() * id;
  if (j.contains("scalar")) return get<double>(j, "scalar", "k_operator") * id;
  Matrix k = complex_matrix(j, "k_operator");
  if (k.rows() != internal_dim || k.cols() != internal_dim)
    throw ParseError("k_operator: expected a " + std::to_string(internal_dim) + "x" +
                     std::to_string(internal_dim) + " matrix");
  return k;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  Scenario sc;
  sc.schema = get<int>(j, "schema", "scenario");
  if (sc.schema != 1) throw ParseError("scenario: unsupported schema " + std::to_string(sc.schema));
  sc.name = j.value("name", std::string("scenario"));
  const json& model = require(j, "model", "scenario");
  sc.sites = get<std::vector<double>>(model, "sites", "model");
  if (sc.sites.empty()) throw ParseError("model.sites: need at least one site");
  sc.components = model.value("components", 1);
  sc.internal_dim = model.value("internal_dim", 1);
  sc.truncation = model.value("truncation", 4);
  if (sc.components < 1 || sc.internal_dim < 1 || sc.truncation < 0)
    throw ParseError("model: dimensions must be positive");
  sc.kernel = require(j, "kernel", "scenario");
  parse_kernel(sc.kernel);
  sc.k_operator = j.value("k_operator", json());
  parse_k_operator(sc.k_operator, sc.internal_dim);
  const json& suites = require(j, "suites", "scenario");
  if (!suites.is_array()) throw ParseError("scenario.suites: expected an array");
  for (const auto& s : suites) {
    if (s.is_string()) {
      sc.suites.push_back({s.get<std::string>(), json::object()});
      continue;
    }
    SuiteSpec spec{get<std::string>(s, "name", "suite"), s};
    spec.params.erase("name");
    sc.suites.push_back(std::move(spec));
  }
  sc.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    sc.tolerances.exact = t.value("exact", sc.tolerances.exact);
    sc.tolerances.fock = t.value("fock", sc.tolerances.fock);
    sc.tolerances.numeric = t.value("numeric", sc.tolerances.numeric);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> families = {
      {"abelian", "q", "r = 1, scalar phase with |q| = 1 and conj q(y1,y2) = q(y2,y1)"},
      {"lifted", "q (r x r phase table)",
       "Q e_i (x) e_j = q(y1,y2,i,j) e_j (x) e_i"},
      {"opposite_type", "theta, q (r x r phase table)",
       "Q e_i (x) e_j = q(y1,y2,i,j) e_theta(j) (x) e_theta(i), theta an involution"},
      {"two_component", "q1, q2", "opposite type with r = 2, q1 on equal and q2 on unequal components"},
      {"three_component", "q1, q2, q3, q4",
       "opposite type with r = 3, theta swapping components 1 and 2"},
      {"fused", "q1, q2, k", "two-component kernel fused over k odd copies, r = 2^k"},
      {"tabulated", "components, entries [{y1, y2, re, im}]",
       "explicit matrices at listed coordinate pairs"},
  };
  return families;
}

}  // namespace mcr::cli
