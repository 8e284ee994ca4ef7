// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "mcr/cli/runner.hpp"
#include "mcr/cli/scenario.hpp"
#include "mcr/fock.hpp"
#include "mcr/pairings.hpp"
#include "mcr/quasifree.hpp"
#include "mcr/random.hpp"
#include "mcr/tensor.hpp"
#include "mcr/wick.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace mcr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Named {
  std::string name;
  ExchangeKernel kernel;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

PhaseFn anyon() { return PhaseFn::exp_sign_diff(0.7); }
PhaseFn sym_q1() { return PhaseFn::exp_sign_diff(0.9); }

ExchangeKernel lifted_kernel() {
  const PhaseFn off = PhaseFn::exp_sign_diff(0.5);
  return make_lifted({{PhaseFn::exp_sign_diff(0.2), off}, {off, PhaseFn::constant(-1.0)}});
}

ExchangeKernel two_component_generic() {
  return make_two_component(PhaseFn::exp_sign_diff(0.9), PhaseFn::exp_diff(0.4));
}

ExchangeKernel two_component_symmetric() { return make_two_component(sym_q1(), sym_q1().swapped()); }

ExchangeKernel three_component() {
  return make_three_component(PhaseFn::exp_sign_diff(0.4), PhaseFn::exp_diff(0.3),
                              PhaseFn::exp_atan_diff(1.1), PhaseFn::exp_sign_diff(-0.6));
}

ExchangeKernel fused3() { return make_fused(sym_q1(), sym_q1().swapped(), 3); }

std::vector<Named> all_families() {
  return {{"CAR", make_abelian(PhaseFn::constant(-1.0))},
          {"CCR", make_abelian(PhaseFn::constant(1.0))},
          {"anyon", make_abelian(anyon())},
          {"lifted", lifted_kernel()},
          {"two-component", two_component_generic()},
          {"three-component", three_component()},
          {"fused k=3", fused3()}};
}

const std::vector<double> kSites3{-0.7, 0.1, 0.9};
const std::vector<double> kSites2{-0.4, 0.6};

FockVector random_state(const FockSpace& fock, Rng& rng, int max_level) {
  FockVector F;
  for (int n = 0; n <= max_level; ++n)
    F.add(n, fock.project(random_vector(rng, static_cast<int>(fock.level_size(n))), n));
  return F;
}

// 1 -------------------------------------------------------------------------
Outcome criterion_1() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, k] : all_families()) {
    const auto rep = check_kernel_axioms(k, DiscreteModel(kSites3, k.components(), 1, 1), 1e-12);
    for (const auto& c : rep.checks) worst = std::max(worst, c.max_residual);
    o.require(rep.all_pass(), name + " fails the kernel axioms");
  }
  o.detail = o.pass ? "7 families on 3 sites, max residual " + sci(worst) : o.detail;
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome criterion_2() {
  Outcome o;
  std::string kappas;
  const std::vector<Named> passing{
      {"CAR", make_abelian(PhaseFn::constant(-1.0))},
      {"two-component", two_component_generic()},
      {"two-component q1=-1", make_two_component(PhaseFn::constant(-1.0), anyon())},
      {"three-component", three_component()},
      {"fused k=3", fused3()}};
  for (const auto& [name, k] : passing) {
    const auto rep = check_assumptions(k, DiscreteModel(kSites3, k.components(), 1, 1), 1e-12);
    o.require(rep.all_pass(), name + " fails an assumption");
    o.require(rep.kappa && (*rep.kappa == 1.0 || *rep.kappa == -1.0), name + " kappa not +-1");
    if (rep.kappa) kappas += name + ": " + std::to_string(static_cast<int>(*rep.kappa)) + ", ";
  }
  const auto lifted = check_assumptions(lifted_kernel(), DiscreteModel(kSites3, 2, 1, 1), 1e-12);
  int failed = 0;
  for (const auto& c : lifted.checks) failed += !c.pass;
  o.require(failed == 1 && !lifted.find("kappa_trace")->pass,
            "mixed-diagonal lifted kernel should fail exactly kappa_trace");
  if (o.pass) o.detail = "kappa " + kappas + "lifted fails kappa_trace only";
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome criterion_3() {
  Outcome o;
  Rng rng(3);
  double proj = 0.0, adj = 0.0, mcr_res = 0.0;
  for (const auto& [name, k] : all_families()) {
    const FockSpace fock(k, DiscreteModel(kSites2, k.components(), 1, 4));
    const int d = fock.dim();
    for (int n = 1; n <= 4; ++n) {
      const auto size = static_cast<int>(fock.level_size(n));
      for (int t = 0; t < 3; ++t) {
        const Vector u = random_vector(rng, size), v = random_vector(rng, size);
        const Vector pu = fock.project(u, n);
        proj = std::max(proj, max_abs(Vector(fock.project(pu, n) - pu)));
        proj = std::max(proj, std::abs(v.dot(pu) - fock.project(v, n).dot(u)));
        if (n >= 2) {
          // P_n = (1/n) (1 (x) P_{n-1}) (1 + U_1 + U_1 U_2 + ... + U_1 ... U_{n-1})
          Vector sum = u;
          std::vector<int> word;
          for (int i = 0; i + 1 < n; ++i) {
            word.push_back(i);
            sum += apply_word(fock.table(), 1, n, word, u);
          }
          const long rest = size / d;
          Vector lifted(size);
          for (long a = 0; a < d; ++a)
            lifted.segment(a * rest, rest) = fock.project(sum.segment(a * rest, rest), n - 1);
          proj = std::max(proj, max_abs(Vector(lifted / n - pu)));
        }
      }
    }
    for (int t = 0; t < 3; ++t) {
      const FockVector F = random_state(fock, rng, 2), G = random_state(fock, rng, 3);
      const Vector f = random_vector(rng, d);
      adj = std::max(adj, std::abs(fock.inner(fock.create(f, F), G) -
                                   fock.inner(F, fock.annihilate(f.conjugate(), G))));
    }
    const auto rep = verify_mcr(FockSpace(k, DiscreteModel(kSites2, k.components(), 1, 3)), 1e-10);
    for (const auto& c : rep.checks) mcr_res = std::max(mcr_res, c.max_residual);
    o.require(rep.all_pass(), name + " fails verify_mcr");
  }
  o.require(proj <= 1e-12, "projection residual " + sci(proj));
  o.require(adj <= 1e-10, "adjointness residual " + sci(adj));
  if (o.pass)
    o.detail = "projection " + sci(proj) + ", adjointness " + sci(adj) + ", MCR " + sci(mcr_res);
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome criterion_4() {
  Outcome o;
  Rng rng(4);
  double worst = 0.0;
  const std::vector<std::pair<std::string, DiscreteModel>> models{
      {"CAR", DiscreteModel(kSites3, 1, 2, 6)},
      {"anyon", DiscreteModel(kSites3, 1, 1, 6)},
      {"lifted", DiscreteModel(kSites2, 2, 1, 6)},
      {"two-component", DiscreteModel(kSites2, 2, 2, 6)},
      {"three-component", DiscreteModel({0.3}, 3, 1, 6)}};
  for (const auto& [name, model] : models) {
    ExchangeKernel k = make_abelian(PhaseFn::constant(-1.0));
    if (name == "anyon") k = make_abelian(anyon());
    if (name == "lifted") k = lifted_kernel();
    if (name == "two-component") k = two_component_generic();
    if (name == "three-component") k = three_component();
    const FockSpace fock(k, model);
    const int d = model.one_particle_dim();
    for (int len : {1, 2, 3, 4, 5, 6}) {
      const int samples = len % 2 ? 2 : 20;
      for (int t = 0; t < samples; ++t) {
        std::vector<FieldTerm> terms;
        for (int i = 0; i < len; ++i) terms.push_back({random_vector(rng, d), random_vector(rng, d)});
        const cplx got = field_moment(fock.table(), model.internal_dim(), terms);
        if (len % 2) {
          o.require(got == cplx{0.0, 0.0}, name + " odd length not exactly 0");
          continue;
        }
        worst = std::max(worst, scaled_error(got, field_vacuum_expectation(fock, terms)));
      }
    }
  }
  o.require(worst <= 1e-8, "max relative error " + sci(worst));
  if (o.pass) o.detail = "lengths 2/4/6, 20 samples each, max relative error " + sci(worst);
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome criterion_5() {
  Outcome o;
  Rng rng(5);
  double worst = 0.0;
  for (int sign : {-1, 1}) {
    const KernelTable q =
        KernelTable::from_kernel(make_abelian(PhaseFn::constant(sign)), DiscreteModel(kSites2, 1, 2, 8));
    for (int len : {2, 4, 6, 8})
      for (int t = 0; t < 5; ++t) {
        std::vector<FieldTerm> terms;
        std::vector<Vector> f, fp;
        for (int i = 0; i < len; ++i) {
          terms.push_back({random_vector(rng, 4), random_vector(rng, 4)});
          f.push_back(terms.back().f);
          fp.push_back(terms.back().f_prime);
        }
        worst = std::max(worst, scaled_error(field_moment(q, 2, terms), oracle::pfaffian_moment(sign, f, fp)));
      }
  }
  o.require(worst <= 1e-10, "max relative error " + sci(worst));
  if (o.pass) o.detail = "q = -1 and q = +1, lengths up to 8, max relative error " + sci(worst);
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome criterion_6() {
  Outcome o;
  Rng rng(6);
  double mcr_res = 0.0, gauge = 0.0;
  struct Case {
    std::string name;
    ExchangeKernel kernel;
    DiscreteModel model;
    int max_level;
  };
  const std::vector<Case> cases{
      {"CAR", make_abelian(PhaseFn::constant(-1.0)), DiscreteModel(kSites2, 1, 2, 1), 2},
      {"CCR", make_abelian(PhaseFn::constant(1.0)), DiscreteModel(kSites2, 1, 2, 1), 2},
      {"anyon", make_abelian(anyon()), DiscreteModel(kSites2, 1, 1, 1), 2},
      {"two-component", two_component_generic(), DiscreteModel(kSites2, 2, 1, 1), 2},
      {"two-component symmetric", two_component_symmetric(), DiscreteModel(kSites2, 2, 2, 1), 1},
      {"three-component", three_component(), DiscreteModel(kSites2, 3, 1, 1), 1}};
  for (const auto& c : cases) {
    const int s = c.model.internal_dim();
    Matrix k = Matrix::Identity(s, s) * 0.3;
    if (s == 2) k(0, 1) = k(1, 0) = 0.1;
    {
      const QuasiFreeContext ctx(c.kernel, c.model, k, c.max_level + 2);
      const auto rep = verify_represented_mcr(ctx, c.max_level, 1e-10);
      for (const auto& r : rep.checks) mcr_res = std::max(mcr_res, r.max_residual);
      o.require(rep.all_pass(), c.name + " represented MCR");
      o.require(verify_adjointness(ctx, 1e-10).all_pass(), c.name + " adjointness");
    }
    const QuasiFreeContext ctx(c.kernel, c.model, k, 4);
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n) {
        if (m + n > 4 || m + n == 0 || (m == n && m > 2)) continue;
        const auto rep = verify_gauge_quasifree(ctx, m, n, 4, rng, 1e-8);
        gauge = std::max(gauge, rep.checks.front().max_residual);
        o.require(rep.all_pass(), c.name + " " + rep.checks.front().name);
      }
  }
  if (o.pass) o.detail = "represented MCR " + sci(mcr_res) + ", gauge identities " + sci(gauge);
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome criterion_7() {
  Outcome o;
  Rng rng(7);
  const Matrix k = Matrix::Identity(1, 1) * 0.3;
  const QuasiFreeContext good(two_component_symmetric(), DiscreteModel(kSites2, 2, 1, 1), k, 4);
  const auto g = verify_strongly_quasifree(good, 4, 5, rng, 1e-8);
  const double good_res = g.find("strongly_quasifree_4")->max_residual;
  o.require(g.find("strongly_quasifree_4")->pass, "symmetric two-component residual " + sci(good_res));
  o.require(g.find("strong_condition")->pass, "symmetric two-component misses the strong condition");
  const QuasiFreeContext bad(make_abelian(anyon()), DiscreteModel(kSites2, 1, 1, 1), k, 4);
  const auto b = verify_strongly_quasifree(bad, 4, 5, rng, 1e-8);
  const double bad_res = b.find("strongly_quasifree_4")->max_residual;
  o.require(bad_res > 1e-6, "anyon residual only " + sci(bad_res));
  if (o.pass) o.detail = "symmetric " + sci(good_res) + ", anyon " + sci(bad_res);
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome criterion_8() {
  Outcome o;
  Rng rng(8);
  const ExchangeKernel k = fused3();
  const DiscreteModel model(kSites2, 8, 1, 1);
  o.require(check_kernel_axioms(k, model).all_pass(), "fused kernel axioms");
  o.require(check_assumptions(k, model).all_pass(), "fused kernel assumptions");
  o.require(strong_condition_residual(k, model) <= 1e-10, "fused kernel strong condition");
  const Matrix kop = Matrix::Identity(1, 1) * 0.3;
  double worst = 0.0;
  {
    const QuasiFreeContext ctx(k, DiscreteModel({0.2}, 8, 1, 1), kop, 2);
    const auto rep = verify_represented_mcr(ctx, 0, 1e-10);
    for (const auto& c : rep.checks) worst = std::max(worst, c.max_residual);
    o.require(rep.all_pass(), "fused represented MCR");
    o.require(verify_adjointness(ctx, 1e-10).all_pass(), "fused adjointness");
  }
  const QuasiFreeContext ctx(k, model, kop, 2);
  for (auto [m, n] : {std::pair{1, 1}, std::pair{1, 0}, std::pair{0, 1}}) {
    const auto rep = verify_gauge_quasifree(ctx, m, n, 5, rng, 1e-8);
    worst = std::max(worst, rep.checks.front().max_residual);
    o.require(rep.all_pass(), "fused " + rep.checks.front().name);
  }
  if (o.pass) o.detail = "r = 8, hypotheses pass, quasi-free residual " + sci(worst);
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome criterion_9() {
  Outcome o;
  Rng rng(9);
  double worst = 0.0, most_negative = 0.0;
  struct Case {
    std::string name;
    ExchangeKernel kernel;
    DiscreteModel model;
  };
  const std::vector<Case> cases{
      {"CAR", make_abelian(PhaseFn::constant(-1.0)), DiscreteModel(kSites2, 1, 1, 6)},
      {"CCR", make_abelian(PhaseFn::constant(1.0)), DiscreteModel(kSites2, 1, 1, 6)},
      {"anyon", make_abelian(anyon()), DiscreteModel(kSites3, 1, 1, 6)},
      {"lifted", lifted_kernel(), DiscreteModel(kSites2, 2, 1, 6)},
      {"two-component", two_component_generic(), DiscreteModel(kSites2, 2, 1, 6)},
      {"three-component", three_component(), DiscreteModel({0.3}, 3, 1, 6)},
      {"fused k=3", fused3(), DiscreteModel({0.3}, 8, 1, 4)}};
  std::bernoulli_distribution coin(0.5);
  for (const auto& c : cases) {
    const FockSpace fock(c.kernel, c.model);
    const WickAlgebra alg(fock.table(), c.model.internal_dim());
    const int d = alg.dim();
    const int max_len = c.model.truncation();
    std::uniform_int_distribution<int> length(1, max_len);
    auto word = [&](int len, std::vector<Letter>* letters) {
      FormalSum w = FormalSum::identity(d);
      for (int i = 0; i < len; ++i) {
        const Sign s = coin(rng) ? Sign::plus : Sign::minus;
        const Vector f = random_vector(rng, d);
        w = product(w, FormalSum::phi(d, f, {s}));
        if (letters) letters->push_back({s, f});
      }
      return w;
    };
    for (int t = 0; t < 50; ++t) {
      std::vector<Letter> letters;
      const FormalSum w = word(length(rng), &letters);
      const double err = scaled_error(alg.symbolic_vacuum(w), vacuum_expectation(fock, letters));
      worst = std::max(worst, err);
    }
    for (int t = 0; t < 5; ++t) {
      FormalSum a = FormalSum::identity(d).scaled(random_vector(rng, 1)(0));
      for (int len = 1; len <= std::min(3, max_len / 2); ++len) a += word(len, nullptr);
      const cplx v = alg.symbolic_vacuum(product(star(a), a));
      most_negative = std::min(most_negative, v.real());
      o.require(std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v)), c.name + " a*a not real");
    }
  }
  o.require(worst <= 1e-8, "symbolic vs matrix " + sci(worst));
  o.require(most_negative >= -1e-10, "negative a*a vacuum " + sci(most_negative));
  if (o.pass) o.detail = "50 words per family, max relative error " + sci(worst) + ", positivity holds";
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome criterion_10() {
  Outcome o;
  const std::string path = std::string(MCR_SOURCE_DIR) + "/scenarios/two_component.json";
  const cli::Scenario sc = cli::load_scenario(path);
  const auto base = std::filesystem::temp_directory_path() / "mcr_acceptance_determinism";
  std::filesystem::remove_all(base);
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* run : {"a", "b"}) {
    const cli::RunResult r = cli::run_scenario(sc, {});
    o.require(r.exit_code == cli::exit_pass, std::string("run ") + run + " exit " + std::to_string(r.exit_code));
    cli::write_reports(sc, r, (base / run).string());
  }
  const std::string a = read(base / "a" / "report.json"), b = read(base / "b" / "report.json");
  o.require(!a.empty() && a == b, "report.json differs");
  if (o.pass) o.detail = "two runs, " + std::to_string(a.size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
