#include "mcr/cli/runner.hpp"

#include "mcr/fock.hpp"
#include "mcr/pairings.hpp"
#include "mcr/quasifree.hpp"
#include "mcr/random.hpp"
#include "mcr/tensor.hpp"
#include "mcr/wick.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace mcr::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

struct Context {
  const Scenario& sc;
  DiscreteModel model;
  ExchangeKernel kernel;
  Matrix k;
  Tolerances tol;
  std::string k_spec;
};

using SuiteFn = std::function<void(const Context&, const json&, Rng&, std::vector<ReportRow>&)>;

void add_report(std::vector<ReportRow>& rows, const std::string& suite, const ValidationReport& rep,
                const json& params = json::object()) {
  for (const auto& c : rep.checks) {
    ReportRow row{suite, c.name, params, c.max_residual, c.tolerance, c.pass};
    if (c.counterexample) {
      row.params["worst_sites"] = c.counterexample->sites;
      row.params["worst_row"] = c.counterexample->row;
      row.params["worst_col"] = c.counterexample->col;
    }
    rows.push_back(std::move(row));
  }
}

void add_row(std::vector<ReportRow>& rows, const std::string& suite, const std::string& check,
             const ResidualTracker& tr, double tol, json params = json::object()) {
  if (tr.where()) params["worst_sample"] = tr.where()->row;
  rows.push_back({suite, check, std::move(params), tr.max(), tol, tr.max() <= tol});
}

json quasifree_params(const Context& ctx, const QuasiFreeContext& qf, int n_or_mn) {
  return {{"kernel_family", to_string(ctx.kernel.family())},
          {"kappa", qf.kappa()},
          {"K_spec", ctx.k_spec},
          {"n_or_mn", n_or_mn}};
}

void suite_kernel_axioms(const Context& ctx, const json&, Rng&, std::vector<ReportRow>& rows) {
  add_report(rows, "kernel_axioms", check_kernel_axioms(ctx.kernel, ctx.model, ctx.tol.exact));
}

void suite_assumptions(const Context& ctx, const json&, Rng&, std::vector<ReportRow>& rows) {
  const ValidationReport rep = check_assumptions(ctx.kernel, ctx.model, ctx.tol.fock);
  json params = json::object();
  if (rep.kappa) params["kappa"] = *rep.kappa;
  add_report(rows, "assumptions", rep, params);
}

void suite_fock_mcr(const Context& ctx, const json&, Rng&, std::vector<ReportRow>& rows) {
  const int level = std::max(ctx.model.truncation(), 3);
  const FockSpace fock(ctx.kernel, ctx.model.with_truncation(level));
  add_report(rows, "fock_mcr", verify_mcr(fock, ctx.tol.fock), {{"truncation", level}});
}

void suite_fock_projection(const Context& ctx, const json& p, Rng&, std::vector<ReportRow>& rows) {
  const int max_level = p.value("max_level", std::min(ctx.model.truncation(), 3));
  const FockSpace fock(ctx.kernel, ctx.model.with_truncation(max_level));
  ResidualTracker idem, herm;
  for (int n = 2; n <= max_level; ++n) {
    const Matrix pm = fock.symmetrizer_matrix(n);
    idem.observe(max_abs(Matrix(pm * pm - pm)), {}, n);
    herm.observe(max_abs(Matrix(pm.adjoint() - pm)), {}, n);
  }
  add_row(rows, "fock_projection", "idempotent", idem, ctx.tol.fock, {{"max_level", max_level}});
  add_row(rows, "fock_projection", "self_adjoint", herm, ctx.tol.fock, {{"max_level", max_level}});
}

void suite_npoint(const Context& ctx, const json& p, Rng& rng, std::vector<ReportRow>& rows) {
  const int max_n = p.value("max_n", 2);
  const int samples = p.value("samples", 3);
  const FockSpace fock(ctx.kernel, ctx.model.with_truncation(max_n));
  const KernelTable& q = fock.table();
  const int d = ctx.model.one_particle_dim();
  for (int n = 1; n <= max_n; ++n) {
    ResidualTracker tr;
    for (int it = 0; it < samples; ++it) {
      std::vector<Vector> ann, cre;
      std::vector<Letter> word;
      for (int k = 0; k < n; ++k) ann.push_back(random_vector(rng, d));
      for (int k = 0; k < n; ++k) cre.push_back(random_vector(rng, d));
      for (const auto& f : ann) word.push_back({Sign::minus, f});
      for (const auto& f : cre) word.push_back({Sign::plus, f});
      tr.observe(scaled_error(npoint_function(q, ctx.model.internal_dim(), ann, cre),
                              vacuum_expectation(fock, word)),
                 {}, it);
    }
    add_row(rows, "npoint", "npoint_" + std::to_string(n), tr, ctx.tol.numeric, {{"n", n}});
  }
}

void suite_moments(const Context& ctx, const json& p, Rng& rng, std::vector<ReportRow>& rows) {
  const int max_length = p.value("max_length", 4);
  const int samples = p.value("samples", 3);
  const FockSpace fock(ctx.kernel, ctx.model.with_truncation(max_length));
  const int d = ctx.model.one_particle_dim();
  for (int len = 1; len <= max_length; ++len) {
    ResidualTracker tr;
    for (int it = 0; it < samples; ++it) {
      std::vector<FieldTerm> terms;
      for (int k = 0; k < len; ++k) {
        Vector f = random_vector(rng, d);
        terms.push_back({f, random_vector(rng, d)});
      }
      tr.observe(scaled_error(field_moment(fock.table(), ctx.model.internal_dim(), terms),
                              field_vacuum_expectation(fock, terms)),
                 {}, it);
    }
    add_row(rows, "moments", "moment_" + std::to_string(len), tr, ctx.tol.numeric,
            {{"length", len}});
  }
}

void suite_gauge(const Context& ctx, const json& p, Rng& rng, std::vector<ReportRow>& rows) {
  const int max_mn = p.value("max_mn", 4);
  const int samples = p.value("samples", 3);
  for (int total = 1; total <= max_mn; ++total)
    for (int m = total; m >= 0; --m) {
      const int n = total - m;
      const QuasiFreeContext qf(ctx.kernel, ctx.model, ctx.k, total);
      const ValidationReport rep = verify_gauge_quasifree(qf, m, n, samples, rng, ctx.tol.numeric);
      json params = quasifree_params(ctx, qf, total);
      params["m"] = m;
      params["n"] = n;
      add_report(rows, "gauge_quasifree", rep, params);
    }
}

void suite_strong(const Context& ctx, const json& p, Rng& rng, std::vector<ReportRow>& rows) {
  const auto ns = p.value("n", std::vector<int>{2, 4});
  const int samples = p.value("samples", 3);
  for (int n : ns) {
    const QuasiFreeContext qf(ctx.kernel, ctx.model, ctx.k, std::max(n, 1));
    const ValidationReport rep = verify_strongly_quasifree(qf, n, samples, rng, ctx.tol.numeric);
    json params = quasifree_params(ctx, qf, n);
    params["strong_condition_residual"] = qf.strong_condition_residual();
    params["strong_condition_holds"] = qf.strong_condition_residual() <= ctx.tol.fock;
    ValidationReport kept;
    for (const auto& c : rep.checks)
      if (c.name != "strong_condition") kept.checks.push_back(c);
    add_report(rows, "strongly_quasifree", kept, params);
  }
}

void suite_represented(const Context& ctx, const json& p, Rng&, std::vector<ReportRow>& rows) {
  const int max_level = p.value("max_level", 1);
  const QuasiFreeContext qf(ctx.kernel, ctx.model, ctx.k, max_level + 2);
  json params = quasifree_params(ctx, qf, max_level);
  add_report(rows, "represented_mcr", verify_represented_mcr(qf, max_level, ctx.tol.fock), params);
  add_report(rows, "represented_mcr", verify_adjointness(qf, ctx.tol.fock), params);
  ResidualTracker delta;
  const int s = ctx.model.internal_dim();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      Vector g1 = Vector::Zero(s), g2 = Vector::Zero(s);
      g1(i) = 1.0;
      g2(j) = 1.0;
      delta.observe(delta_identity_residual(qf, g1, g2), {}, i, j);
    }
  add_row(rows, "represented_mcr", "delta_identity", delta, ctx.tol.fock, params);
}

Signature random_signature(Rng& rng, int len) {
  Signature sig;
  for (int k = 0; k < len; ++k)
    sig.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? Sign::plus : Sign::minus);
  return sig;
}

void suite_wick(const Context& ctx, const json& p, Rng& rng, std::vector<ReportRow>& rows) {
  const int words = p.value("words", 10);
  const int max_length = p.value("max_length", 4);
  const FockSpace fock(ctx.kernel, ctx.model.with_truncation(max_length));
  const WickAlgebra alg(fock.table(), ctx.model.internal_dim());
  const int d = alg.dim();
  ResidualTracker agree, order;
  for (int it = 0; it < words; ++it) {
    const int len = std::uniform_int_distribution<int>(1, max_length)(rng);
    const Signature sig = random_signature(rng, len);
    const Vector coeff = random_vector(rng, static_cast<int>(checked_power(d, len, kDefaultEntryCap)));
    const FormalSum a = FormalSum::phi(d, coeff, sig);
    const cplx left = alg.symbolic_vacuum(a);
    const FockVector out = fock.apply_phi(coeff, sig, fock.vacuum());
    agree.observe(scaled_error(left, fock.inner(out, fock.vacuum())), {}, it);
    OrderingOptions opt;
    opt.order = RuleOrder::random;
    opt.seed = rng();
    order.observe(scaled_error(alg.symbolic_vacuum(a, opt), left), {}, it);
  }
  add_row(rows, "wick", "vacuum_agreement", agree, ctx.tol.numeric, {{"words", words}});
  add_row(rows, "wick", "order_independence", order, ctx.tol.fock, {{"words", words}});
}

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table = {
      {"kernel_axioms", suite_kernel_axioms}, {"assumptions", suite_assumptions},
      {"fock_mcr", suite_fock_mcr},           {"fock_projection", suite_fock_projection},
      {"npoint", suite_npoint},               {"moments", suite_moments},
      {"gauge_quasifree", suite_gauge},       {"strongly_quasifree", suite_strong},
      {"represented_mcr", suite_represented}, {"wick", suite_wick},
  };
  return table;
}

std::string describe_k(const json& j) {
  if (j.is_null()) return "0.5*I";
  if (j.is_number()) return format_double(j.get<double>()) + "*I";
  if (j.contains("scalar")) return format_double(j.at("scalar").get<double>()) + "*I";
  return "matrix";
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  RunResult result;
  for (const auto& s : sc.suites)
    if (!suite_table().count(s.name)) {
      result.exit_code = exit_parse;
      result.error = "unknown suite \"" + s.name + "\"";
      return result;
    }

  Tolerances tol = sc.tolerances;
  if (opt.tol) tol = {*opt.tol, *opt.tol, *opt.tol};
  DiscreteModel model = sc.model();
  if (opt.level) model = model.with_truncation(*opt.level);

  std::optional<Context> ctx;
  try {
    ExchangeKernel kernel = construct_family(parse_kernel(sc.kernel), model, tol.exact);
    ctx.emplace(Context{sc, model, std::move(kernel), parse_k_operator(sc.k_operator, sc.internal_dim),
                        tol, describe_k(sc.k_operator)});
  } catch (const Error& e) {
    result.exit_code = exit_parse;
    result.error = e.what();
    return result;
  }

  const std::uint64_t seed = opt.seed.value_or(sc.seed);
  for (std::size_t i = 0; i < sc.suites.size(); ++i) {
    const SuiteSpec& suite = sc.suites[i];
    if (!opt.suites.empty() &&
        std::find(opt.suites.begin(), opt.suites.end(), suite.name) == opt.suites.end())
      continue;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    try {
      suite_table().at(suite.name)(*ctx, suite.params, rng, result.rows);
    } catch (const ResourceLimit& e) {
      result.exit_code = exit_resource;
      result.error = suite.name + ": " + e.what();
      return result;
    } catch (const TruncationOverflow& e) {
      result.exit_code = exit_resource;
      result.error = suite.name + ": " + e.what();
      return result;
    } catch (const Error& e) {
      result.exit_code = exit_parse;
      result.error = suite.name + ": " + e.what();
      return result;
    } catch (const json::exception& e) {
      result.exit_code = exit_parse;
      result.error = suite.name + ": bad parameter: " + e.what();
      return result;
    }
  }
  const bool ok = std::all_of(result.rows.begin(), result.rows.end(),
                              [](const ReportRow& r) { return r.pass; });
  result.exit_code = ok ? exit_pass : exit_failure;
  return result;
}

json report_json(const RunResult& result) {
  json out = json::array();
  for (const auto& r : result.rows)
    out.push_back({{"suite", r.suite},
                   {"check", r.check},
                   {"params", r.params},
                   {"residual", r.residual},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  if (!result.error.empty())
    out.push_back({{"suite", "run"},
                   {"check", "error"},
                   {"params", {{"message", result.error}, {"exit_code", result.exit_code}}},
                   {"residual", nullptr},
                   {"tolerance", nullptr},
                   {"pass", false}});
  return out;
}

std::string report_text(const Scenario& sc, const RunResult& result) {
  std::ostringstream os;
  os << "scenario " << sc.name << "\n";
  std::size_t passed = 0;
  for (const auto& r : result.rows) {
    os << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(20) << r.suite << std::setw(28)
       << r.check << " residual " << format_double(r.residual) << " tol "
       << format_double(r.tolerance) << "\n";
    if (r.pass) ++passed;
  }
  os << passed << "/" << result.rows.size() << " checks passed\n";
  if (!result.error.empty()) os << "error: " << result.error << "\n";
  os << "exit " << result.exit_code << "\n";
  return os.str();
}

void write_reports(const Scenario& sc, const RunResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream(base / "report.json") << report_json(result).dump(2) << "\n";
  std::ofstream(base / "report.txt") << report_text(sc, result);
}

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> suites = {
      {"kernel_axioms", "pointwise axioms of the exchange kernel on the model sites", "",
       {{"unitarity", "Q(y1,y2) Q(y1,y2)* = 1"},
        {"adjoint_symmetry", "Q(y1,y2)* = Q(y2,y1)"},
        {"yang_baxter", "Q1(y1,y2) Q2(y1,y3) Q1(y2,y3) = Q2(y2,y3) Q1(y1,y3) Q2(y1,y2)"}}},
      {"assumptions", "conditions needed by the doubling construction", "",
       {{"tilde_unitary", "Q~(y1,y2) is unitary"},
        {"tilde_adjoint", "Q~(y1,y2)* = Q~(y2,y1)"},
        {"tilde_involution", "the tilde transform applied twice is the identity"},
        {"hat_identity", "Q^ computed from Q agrees with its defining action"},
        {"hat_tilde_identity", "hat and tilde transforms are compatible"},
        {"kappa_trace", "Tr(Q~(y,y) v) = kappa Tr(v) with one real kappa for all sites"},
        {"doubled_unitarity", "doubled kernel is unitary on all copy pairs"},
        {"doubled_adjoint_symmetry", "doubled kernel satisfies adjoint symmetry"},
        {"doubled_yang_baxter", "doubled kernel satisfies the Yang-Baxter equation"}}},
      {"fock_mcr", "exchange relations of creation/annihilation operators on the Fock space", "",
       {{"mcr_plus_plus", "a+(f) a+(g) = Phi(U (f (x) g); +,+)"},
        {"mcr_minus_minus", "a-(f) a-(g) = Phi(U^ (f (x) g); -,-)"},
        {"mcr_minus_plus", "a-(f) a+(g) = <f,g> + Phi(U~ (f (x) g); +,-)"}}},
      {"fock_projection", "the normalized symmetrizer P_n", "max_level",
       {{"idempotent", "P_n^2 = P_n"}, {"self_adjoint", "P_n* = P_n"}}},
      {"npoint", "n-point functions against the sum over permutation pairings", "max_n, samples",
       {{"npoint_<n>", "tau(a-...a- a+...a+) equals the pair-partition sum"}}},
      {"moments", "field moments against the sum over all pair partitions",
       "max_length, samples",
       {{"moment_<n>", "tau of a product of fields equals the pair-partition sum"}}},
      {"gauge_quasifree", "doubled-space state against the gauge-invariant pair sum",
       "max_mn, samples",
       {{"gauge_quasifree_<m>_<n>",
         "tau(A+...A+ A-...A-) = delta_mn sum over pairings with rho2 weights"}}},
      {"strongly_quasifree", "doubled-space state against the full pair-partition sum",
       "n (list), samples",
       {{"strongly_quasifree_<n>", "tau(B(f1)...B(fn)) = sum over pairings with lambda2 weights"}}},
      {"represented_mcr", "represented operators A+- on the doubled Fock space", "max_level",
       {{"mcr_plus_plus", "A+ A+ exchange relation"},
        {"mcr_minus_minus", "A- A- exchange relation"},
        {"mcr_minus_plus", "A- A+ exchange relation with the identity term"},
        {"adjointness", "(A+(f))* = A-(Jf)"},
        {"delta_identity", "sum (K2' g1)(K2 g2) - kappa sum (K1' g1)(K1 g2) = sum g1 g2"}}},
      {"wick", "symbolic normal ordering against the matrix representation",
       "words, max_length",
       {{"vacuum_agreement", "scalar part of the normal form equals the Fock vacuum value"},
        {"order_independence", "scalar part does not depend on the rewrite order"}}},
  };
  return suites;
}

const SuiteInfo* find_suite(const std::string& name) {
  for (const auto& s : suite_catalog())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace mcr::cli
