#pragma once

#include "config.hpp"

#include "bltt/minres.hpp"
#include "bltt/problems.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bltt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;

inline constexpr std::string_view kBenchHeader =
    "N,m_plus_1,DoF,solver,iterations,wall_time_s,converged,true_rel_residual";

struct SolveOutcome {
  Problem problem;
  MinresResult result;
  double setup_time = 0.0; ///< problem assembly and preconditioner construction
  double max_rel_error = 0.0; ///< max |x - u| / max |u| against the exact solution
};

/// Builds the problem, symmetrizes the right-hand side (Y f) and runs MINRES.
/// The reported wall time covers the MINRES loop only.
SolveOutcome run_solve(const ProblemSpec& spec, Solver solver, double alpha,
                       const MinresConfig& minres);

struct BenchRow {
  std::size_t steps = 0;
  std::size_t m_plus_1 = 0;
  std::size_t dof = 0;
  Solver solver = Solver::Abac;
  std::size_t iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  double true_rel_residual = 0.0;
  std::string error; ///< non-empty when the row failed
};

/// One row per (size, solver); rows are independent and a failure is kept in `error`.
std::vector<BenchRow> run_bench(const RunConfig& cfg);

/// Header plus rows; non-converged rows and counts above `cap` print "-".
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows, std::size_t cap);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace bltt::cli
