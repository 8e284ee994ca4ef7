#include "mcr/cli/runner.hpp"
#include "mcr/cli/scenario.hpp"
#include "mcr/kernel_table.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace mcr;
using namespace mcr::cli;

namespace {

int cmd_run(const std::string& path, const RunOptions& opt, const std::string& out) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_parse;
  }
  const RunResult result = run_scenario(sc, opt);
  write_reports(sc, result, out);
  std::cout << report_text(sc, result);
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}

int cmd_kernels() {
  for (const auto& f : family_catalog())
    std::cout << f.name << "\n  parameters: " << f.parameters << "\n  " << f.description << "\n";
  return 0;
}

int cmd_explain(const std::string& name) {
  const SuiteInfo* s = find_suite(name);
  if (!s) {
    std::cerr << "error: unknown suite \"" << name << "\"; known suites:";
    for (const auto& x : suite_catalog()) std::cerr << " " << x.name;
    std::cerr << "\n";
    return exit_parse;
  }
  std::cout << s->name << ": " << s->summary << "\n";
  if (!s->parameters.empty()) std::cout << "parameters: " << s->parameters << "\n";
  for (const auto& c : s->checks) std::cout << "  " << c.name << ": " << c.statement << "\n";
  return 0;
}

int cmd_dump(const std::string& path) {
  try {
    const Scenario sc = load_scenario(path);
    const DiscreteModel model = sc.model();
    const ExchangeKernel kernel = construct_family(parse_kernel(sc.kernel), model);
    const KernelTable table = KernelTable::from_kernel(kernel, model);
    json out = {{"family", to_string(kernel.family())},
                {"label", kernel.label()},
                {"components", kernel.components()},
                {"sites", model.sites()}};
    if (kernel.kappa()) out["kappa"] = *kernel.kappa();
    json entries = json::array();
    for (int a = 0; a < table.sites(); ++a)
      for (int b = 0; b < table.sites(); ++b)
        for (const auto& e : table.sparse(a, b))
          entries.push_back({{"a", a}, {"b", b}, {"row", e.row}, {"col", e.col},
                             {"re", e.value.real()}, {"im", e.value.imag()}});
    out["entries"] = entries;
    std::cout << out.dump(2) << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_parse;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exchange-kernel Fock space and quasi-free state verifier"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = ".";
  RunOptions opt;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int level = 0;
  auto* run = app.add_subcommand("run", "run the suites of a scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  auto* tol_opt = run->add_option("--tol", tol, "replace every tolerance");
  auto* level_opt = run->add_option("--level", level, "Fock truncation override");
  run->add_option("--suite", opt.suites, "run only the named suites");
  run->add_option("--out", out_dir, "directory for report.json and report.txt");

  auto* kernels = app.add_subcommand("kernels", "kernel families");
  kernels->require_subcommand(1);
  kernels->add_subcommand("list", "list kernel families and their parameters");

  std::string suite_name;
  auto* explain = app.add_subcommand("explain", "describe the checks of a suite");
  explain->add_option("suite", suite_name)->required();

  std::string dump_path;
  auto* dump = app.add_subcommand("dump", "print the kernel table of a scenario as JSON");
  dump->add_option("scenario", dump_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_parse;
  }

  if (*run) {
    if (*seed_opt) opt.seed = seed;
    if (*tol_opt) opt.tol = tol;
    if (*level_opt) opt.level = level;
    return cmd_run(scenario_path, opt, out_dir);
  }
  if (*kernels) return cmd_kernels();
  if (*explain) return cmd_explain(suite_name);
  if (*dump) return cmd_dump(dump_path);
  return exit_parse;
}
