// Command-line front end: build | verify | rc-table | certificate | crossed-report.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cuntzlab/cli.hpp"

int main(int argc, char** argv) {
  using namespace cuntzlab;
  CLI::App app{"Exact stage-by-stage checks for an AH algebra with a finite group action"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::uint64_t seed = 0;
  std::string lambda, format = "json";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "Zn, Dn, Sn (n<=5), Q8, products like Z2xZ2, or a .json table")
        ->capture_default_str();
    sub->add_option("--eta", cfg.eta, "target radius, exact rational p/q in (0, 1/card G)")->capture_default_str();
    sub->add_option("--stages", cfg.stages, "number of stages")->capture_default_str();
    sub->add_option("--matrix-cap", cfg.matrix_cap, "largest fiber materialized")->capture_default_str();
    sub->add_option("--seed", seed, "seed for sampled checks (required by verify)");
    sub->add_option("--horizon", cfg.horizon, "certificate check horizon")->capture_default_str();
    sub->add_option("--lambda", lambda, "certificate lambda, exact rational < eta");
    sub->add_option("--output,-o", cfg.output, "output file (default: $CUNTZLAB_OUTPUT_DIR/<command>.<ext>, else stdout)");
    sub->add_option("--format", format, "json or csv (csv: rc-table only)")->capture_default_str();
    sub->add_flag("--decimals", cfg.decimals, "add decimal approximation columns");
    sub->add_flag("--timing", cfg.timing, "record per-check wall time (makes output nondeterministic)");
    sub->add_option("--trials", cfg.trials, "random samples per check")->capture_default_str();
    sub->add_option("--fixed-point-cap", cfg.fixed_point_cap, "largest fiber for the fixed-point solve")
        ->capture_default_str();
  };

  const std::map<std::string, std::string> about = {
      {"build", "stage ledger, fibers and the Fell intertwiner"},
      {"verify", "exact equivariance, rank, outerness and crossed-product checks (needs --seed)"},
      {"rc-table", "finite-stage upper bounds for the algebra and its crossed product"},
      {"certificate", "stage n and multiplicity M witnessing failure of lambda-comparison (needs --lambda)"},
      {"crossed-report", "crossed-product identities, fixed points and irrep dimensions"}};
  std::string command;
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    add_common(sub);
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  for (const auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--lambda")) cfg.lambda = lambda;
  }
  RunResult res;
  try {
    cfg.format = parse_format(format);
    res = run(command, cfg);
  } catch (const Error& e) {
    res.exit_code = kExitConfig;
    res.payload = serialize(error_object(e.code(), e.what()));
  }
  if (res.written) std::cerr << "wrote " << res.written->string() << "\n";
  else std::cout << res.payload;
  if (res.exit_code != kExitPass && res.written && res.report.contains("error"))
    std::cerr << res.payload;
  return res.exit_code;
}
