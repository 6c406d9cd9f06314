#include "commands.hpp"

#include "bltt/abac.hpp"
#include "bltt/errors.hpp"
#include "bltt/operator.hpp"
#include "bltt/oracle.hpp"
#include "bltt/properties.hpp"
#include "bltt/spectral.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace bltt::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Opens `path` for writing, or hands back `fallback` when the path is empty.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError(path + ": cannot open output file");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

} // namespace

SolveOutcome run_solve(const ProblemSpec& spec, Solver solver, double alpha,
                       const MinresConfig& minres) {
  const auto start = Clock::now();
  SolveOutcome out{build_problem(spec), {}, 0.0, 0.0};
  const Problem& p = out.problem;
  const auto rhs = time_reverse(p.rhs, p.spectral->modes(), p.spectral->steps());

  LinearMap prec_inv;
  if (solver != Solver::None) {
    auto prec = std::make_shared<const AbacPreconditioner>(
        build_abac(*p.spectral, solver == Solver::Abac ? alpha : 1.0));
    prec_inv = [prec](std::span<const double> in, std::span<double> o) { prec->apply_inverse(in, o); };
  }
  const LinearMap a = p.symmetrized_matvec();
  out.setup_time = seconds_since(start);

  out.result = minres_solve(a, prec_inv, rhs, minres);

  const auto exact = p.exact_vector();
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    err = std::max(err, std::abs(out.result.x[i] - exact[i]));
    scale = std::max(scale, std::abs(exact[i]));
  }
  out.max_rel_error = scale > 0.0 ? err / scale : err;
  return out;
}

std::vector<BenchRow> run_bench(const RunConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& [n, mp1] : cfg.bench.sizes)
    for (Solver s : cfg.bench.solvers) {
      BenchRow r;
      r.steps = n;
      r.m_plus_1 = mp1;
      r.solver = s;
      rows.push_back(r);
    }

  auto work = [&cfg](BenchRow& r) {
    try {
      const ProblemSpec spec = cfg.problem.resolve(r.m_plus_1, r.steps);
      spec.validate();
      r.dof = spec.steps * (spec.dims == 1 ? spec.m : spec.m * spec.m);
      MinresConfig m = cfg.minres;
      m.record_history = false;
      const auto outcome = run_solve(spec, r.solver, cfg.alpha, m);
      r.iterations = outcome.result.report.iterations;
      r.wall_time = outcome.result.report.wall_time;
      r.converged = outcome.result.report.converged;
      r.true_rel_residual = outcome.result.report.final_true_residual;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  const std::size_t threads = std::min(cfg.bench.parallel, std::max<std::size_t>(rows.size(), 1));
  if (threads <= 1) {
    for (auto& r : rows) work(r);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) work(rows[i]);
    });
  for (auto& th : pool) th.join();
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows, std::size_t cap) {
  os << kBenchHeader << '\n';
  for (const auto& r : rows) {
    os << r.steps << ',' << r.m_plus_1 << ',' << r.dof << ',' << to_string(r.solver) << ',';
    if (!r.error.empty()) {
      os << "error,,false,\n";
      continue;
    }
    if (!r.converged || r.iterations > cap) os << '-';
    else os << r.iterations;
    os << ',' << format_double(r.wall_time) << ',' << (r.converged ? "true" : "false") << ','
       << format_double(r.true_rel_residual) << '\n';
  }
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = cfg.problem.resolve();
  const auto outcome = run_solve(spec, cfg.solver, cfg.alpha, cfg.minres);
  const auto& rep = outcome.result.report;
  const auto& p = outcome.problem;

  YAML::Emitter e;
  e.SetDoublePrecision(10);
  e << YAML::BeginMap;
  e << YAML::Key << "problem" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "family" << YAML::Value << std::string(to_string(spec.family));
  e << YAML::Key << "m_plus_1" << YAML::Value << spec.m + 1;
  e << YAML::Key << "steps" << YAML::Value << spec.steps;
  e << YAML::Key << "dims" << YAML::Value << spec.dims;
  e << YAML::Key << "dof" << YAML::Value << p.size();
  e << YAML::Key << "operator" << YAML::Value << p.spectral->note();
  e << YAML::EndMap;
  e << YAML::Key << "solver" << YAML::Value << std::string(to_string(cfg.solver));
  if (cfg.solver == Solver::Abac) e << YAML::Key << "alpha" << YAML::Value << cfg.alpha;
  e << YAML::Key << "convention" << YAML::Value << std::string(to_string(cfg.minres.convention));
  e << YAML::Key << "tol" << YAML::Value << cfg.minres.tol;
  e << YAML::Key << "iterations" << YAML::Value << rep.iterations;
  e << YAML::Key << "converged" << YAML::Value << rep.converged;
  e << YAML::Key << "krylov_exhausted" << YAML::Value << rep.krylov_exhausted;
  e << YAML::Key << "final_monitored" << YAML::Value << rep.final_monitored;
  e << YAML::Key << "true_rel_residual" << YAML::Value << rep.final_true_residual;
  e << YAML::Key << "max_rel_error" << YAML::Value << outcome.max_rel_error;
  e << YAML::Key << "setup_time_s" << YAML::Value << outcome.setup_time;
  e << YAML::Key << "solve_time_s" << YAML::Value << rep.wall_time;
  e << YAML::EndMap;
  {
    Sink sink(cfg.output.report, out);
    sink.get() << e.c_str() << '\n';
  }

  if (!cfg.output.history.empty()) {
    Sink sink(cfg.output.history, out);
    sink.get() << "iteration,monitored,natural\n" << std::setprecision(17);
    for (std::size_t k = 0; k < rep.residual_history.size(); ++k)
      sink.get() << k + 1 << ',' << rep.residual_history[k] << ',' << rep.natural_history[k] << '\n';
  }
  if (!cfg.output.solution.empty()) {
    Sink sink(cfg.output.solution, out);
    auto& os = sink.get();
    os << "n,t,j,x1,x2,u,exact\n" << std::setprecision(17);
    const std::size_t mm = p.spectral->modes();
    const auto exact = p.exact_vector();
    for (std::size_t n = 0; n < spec.steps; ++n)
      for (std::size_t j = 0; j < mm; ++j) {
        const auto x = grid_point(spec, j);
        os << n + 1 << ',' << double(n + 1) * spec.tau() << ',' << j << ',' << x[0] << ','
           << (spec.dims == 2 ? x[1] : 0.0) << ',' << outcome.result.x[n * mm + j] << ','
           << exact[n * mm + j] << '\n';
      }
  }
  if (!rep.converged) {
    err << "solve: no convergence after " << rep.iterations << " iterations (monitored residual "
        << rep.final_monitored << ")\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = run_bench(cfg);
  Sink sink(cfg.output.table, out);
  write_bench_csv(sink.get(), rows, cfg.bench.cap);
  bool failed = false;
  for (const auto& r : rows)
    if (!r.error.empty()) {
      failed = true;
      err << "bench: row N=" << r.steps << " m_plus_1=" << r.m_plus_1 << " solver="
          << to_string(r.solver) << " failed: " << r.error << '\n';
    }
  return failed ? kExitConfig : kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<SpectralBlttOperator> op;
  if (!cfg.spectrum.operator_csv.empty()) {
    std::ifstream in(cfg.spectrum.operator_csv);
    if (!in) throw ConfigError(cfg.spectrum.operator_csv + ": cannot open operator file");
    op = read_operator_csv(in);
  } else {
    const ProblemSpec spec = cfg.problem.resolve();
    const std::size_t mm = spec.dims == 1 ? spec.m : spec.m * spec.m;
    check_oracle_size(mm, spec.steps);
    op = *build_problem(spec).spectral;
  }
  check_oracle_size(op->modes(), op->steps());

  const double alpha = cfg.alpha;
  const DenseBundle bundle = make_dense_bundle(*op, alpha);
  std::optional<TheoryBounds> tb;
  std::string why;
  try {
    tb = theory_bounds(*op, alpha, cfg.spectrum.delta, &bundle);
  } catch (const std::exception& e) {
    why = e.what();
  }
  const bool applicable = tb && tb->alpha_within_nu();
  const double radius = tb ? alpha * tb->mu : 0.0;

  {
    Sink sink(cfg.output.table, out);
    auto& os = sink.get();
    os << "index,eigenvalue,distance_to_cluster,inside_bound\n" << std::setprecision(17);
    const auto& ev = bundle.preconditioned_spectrum;
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const double d = std::abs(std::abs(ev[k]) - 1.0);
      os << k << ',' << ev[k] << ',' << d << ',';
      if (applicable) os << (d <= radius ? "true" : "false");
      else os << "n/a";
      os << '\n';
    }
    if (cfg.output.bounds.empty()) os << '\n';
  }
  Sink sink(cfg.output.bounds, out);
  auto& os = sink.get();
  os << "quantity,value\n" << std::setprecision(17);
  os << "alpha," << alpha << '\n';
  os << "e_alpha_norm," << e_alpha_norm(bundle) << '\n';
  if (tb) {
    os << "c0," << tb->c0 << '\n'
       << "mu," << tb->mu << '\n'
       << "mu_modes," << tb->mu_modes << '\n'
       << "nu," << tb->nu << '\n'
       << "delta," << tb->delta << '\n'
       << "zeta," << tb->zeta << '\n'
       << "interval_neg_lo," << -1.0 - radius << '\n'
       << "interval_neg_hi," << -1.0 + radius << '\n'
       << "interval_pos_lo," << 1.0 - radius << '\n'
       << "interval_pos_hi," << 1.0 + radius << '\n';
    const auto ib = iteration_bound_check(*tb, cfg.minres.tol);
    os << "iteration_bound," << (ib.applicable ? std::to_string(ib.iterations) : "n/a") << '\n';
  }
  os << "bound_applicable," << (applicable ? "true" : "false") << '\n';
  if (!applicable) {
    err << "spectrum: interval bound not applicable: "
        << (tb ? "alpha = " + format_double(alpha) + " exceeds nu = " + format_double(tb->nu) : why)
        << '\n';
  }
  return kExitOk;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  PropertySuiteOptions options;
  options.seed = cfg.oracle.seed;
  options.sizes = cfg.oracle.sizes;
  for (const auto& s : options.sizes) check_oracle_size(SpatialGrid{s.m, s.dims}.size(), s.steps);
  const auto start = Clock::now();
  const auto results = run_property_suite(options);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(32) << r.name << std::right
        << " value=" << std::setprecision(3) << std::scientific << r.value
        << " threshold=" << r.threshold << std::defaultfloat << " cases=" << r.cases;
    if (!r.passed) out << " at " << r.detail;
    out << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << '/' << results.size() << " properties passed (seed "
      << options.seed << ", " << std::setprecision(3) << seconds_since(start) << " s)\n";
  if (failed) {
    err << "oracle-check: " << failed << " propert" << (failed == 1 ? "y" : "ies") << " failed\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

} // namespace bltt::cli
