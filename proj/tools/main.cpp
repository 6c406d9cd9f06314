#include "commands.hpp"
#include "config.hpp"

#include "bltt/transforms.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<double> alpha;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::string> out;
  std::optional<std::size_t> parallel;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<std::string> solver;
  std::optional<std::string> convention;
  std::vector<std::string> sizes;
  std::string fault = "none";
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "YAML configuration file");
  cmd->add_option("--alpha", f.alpha, "ABAC parameter alpha in (0, 1]");
  cmd->add_option("--tol", f.tol, "MINRES tolerance");
  cmd->add_option("--max-iter", f.max_iter, "MINRES iteration limit");
  cmd->add_option("--out", f.out, "output path (report, table or summary)");
  cmd->add_option("--convention", f.convention,
                  "residual convention: true-relative, preconditioned-relative, "
                  "preconditioned-absolute");
}

bltt::cli::RunConfig assemble(const Flags& f, const std::string& command) {
  using namespace bltt::cli;
  RunConfig cfg = f.config.empty() ? default_config() : load_config(f.config);
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.tol) cfg.minres.tol = *f.tol;
  if (f.max_iter) cfg.minres.max_iter = *f.max_iter;
  if (f.parallel) cfg.bench.parallel = *f.parallel;
  if (f.seed) {
    cfg.oracle.seed = *f.seed;
    cfg.minres.probe_seed = *f.seed;
  }
  if (f.cap) cfg.bench.cap = *f.cap;
  try {
    if (f.solver) cfg.solver = parse_solver(*f.solver);
    if (f.convention) cfg.minres.convention = bltt::parse_residual_convention(*f.convention);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!f.sizes.empty()) {
    cfg.oracle.sizes.clear();
    for (const auto& s : f.sizes) {
      bltt::SuiteSize size;
      char c1 = 0, c2 = 0;
      std::istringstream is(s);
      if (!(is >> size.m >> c1 >> size.dims >> c2 >> size.steps) || c1 != ',' || c2 != ',' ||
          size.m < 1 || size.steps < 1 || (size.dims != 1 && size.dims != 2))
        throw ConfigError("--size expects m,dims,N (got '" + s + "')");
      cfg.oracle.sizes.push_back(size);
    }
  }
  if (f.out) {
    if (command == "solve") cfg.output.report = *f.out;
    else cfg.output.table = *f.out;
  }
  validate(cfg);
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  using namespace bltt::cli;
  CLI::App app{"All-at-once BLTT solver with the ABAC-preconditioned MINRES method"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "Solve one problem and write a report");
  add_common(solve, f);
  solve->add_option("--solver", f.solver, "abac, block-circulant or none");

  auto* bench = app.add_subcommand("bench", "Sweep grid sizes and solvers into a CSV table");
  add_common(bench, f);
  bench->add_option("--parallel", f.parallel, "rows solved concurrently");
  bench->add_option("--cap", f.cap, "iteration counts above this print as '-'");

  auto* spectrum = app.add_subcommand("spectrum", "Preconditioned spectrum and theory bounds");
  add_common(spectrum, f);

  auto* oracle = app.add_subcommand("oracle-check", "Run the property suite against the dense oracle");
  add_common(oracle, f);
  oracle->add_option("--seed", f.seed, "random seed");
  oracle->add_option("--size", f.sizes, "operator grid m,dims,N (repeatable)");
  oracle->add_option("--inject-fault", f.fault, "deliberate defect: none, dft-normalization")
      ->check(CLI::IsMember({"none", "dft-normalization"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    const RunConfig cfg = assemble(f, cmd->get_name());
    if (f.fault == "dft-normalization") bltt::detail::inject_fault(bltt::detail::Fault::DftNormalization);
    if (cmd == solve) return cmd_solve(cfg, std::cout, std::cerr);
    if (cmd == bench) return cmd_bench(cfg, std::cout, std::cerr);
    if (cmd == spectrum) return cmd_spectrum(cfg, std::cout, std::cerr);
    return cmd_oracle_check(cfg, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
