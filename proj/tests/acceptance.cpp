// Reproduction and property checks for the headline claims. Prints one
// PASS/FAIL line per criterion and exits nonzero if any criterion fails.

#include "commands.hpp"
#include "config.hpp"

#include "bltt/abac.hpp"
#include "bltt/minres.hpp"
#include "bltt/operator.hpp"
#include "bltt/problems.hpp"
#include "bltt/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace bltt;
using cli::Solver;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kAlpha = 1e-8;
constexpr double kTol = 1e-6;

MinresConfig table_config() {
  MinresConfig c;
  c.tol = kTol;
  c.max_iter = 1000;
  c.convention = ResidualConvention::TrueRelative;
  c.record_history = false;
  return c;
}

struct Count {
  std::size_t iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

Count solve(const ProblemSpec& spec, Solver solver) {
  const auto out = cli::run_solve(spec, solver, kAlpha, table_config());
  return {out.result.report.iterations, out.result.report.converged,
          out.setup_time + out.result.report.wall_time};
}

struct Check {
  std::ostringstream detail;
  bool ok = true;

  // Records `label=value` and whether value lies in [lo, hi].
  void within(const std::string& label, const Count& c, long lo, long hi) {
    const auto v = static_cast<long>(c.iterations);
    const bool good = c.converged && v >= lo && v <= hi;
    detail << ' ' << label << '=' << v << (c.converged ? "" : "(nc)");
    if (!good) detail << "[want " << lo << ".." << hi << ']';
    ok = ok && good;
  }
  void flat(const std::string& label, const std::vector<Count>& counts, long spread) {
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    bool conv = true;
    detail << ' ' << label << "={";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      detail << (i ? "," : "") << counts[i].iterations;
      lo = std::min(lo, counts[i].iterations);
      hi = std::max(hi, counts[i].iterations);
      conv = conv && counts[i].converged;
    }
    detail << '}';
    const bool good = conv && static_cast<long>(hi - lo) <= spread;
    if (!good) detail << "[spread " << hi - lo << " > " << spread << ']';
    ok = ok && good;
  }
  void require(const std::string& label, bool good, const std::string& info) {
    detail << ' ' << label << '=' << info;
    if (!good) detail << "[fail]";
    ok = ok && good;
  }
};

struct Criterion {
  int id;
  std::string title;
  std::function<void(Check&)> run;
};

std::string fmt(double v, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void criterion_heat(Check& c, Family scheme, long p1_target, bool check_identity) {
  const auto spec = example1(scheme, 32, 32);
  const Count abac = solve(spec, Solver::Abac);
  c.within("P_alpha", abac, 0, 4);
  c.within("P_1", solve(spec, Solver::BlockCirculant), p1_target - 10, p1_target + 10);
  if (check_identity) {
    c.within("I", solve(spec, Solver::None), 43, 53);
    c.require("time_s", abac.seconds < 5.0, fmt(abac.seconds));
  }
}

// Benchmark grids along each axis: m+1 in {32..256} at N = 32, N in {32..256} at m+1 = 32.
std::vector<std::pair<std::size_t, std::size_t>> benchmark_grids() {
  std::vector<std::pair<std::size_t, std::size_t>> g; // (N, m+1)
  for (std::size_t mp1 : {32u, 64u, 128u, 256u}) g.emplace_back(32, mp1);
  for (std::size_t n : {64u, 128u, 256u}) g.emplace_back(n, 32);
  return g;
}

std::vector<Count> sweep(const std::function<ProblemSpec(std::size_t, std::size_t)>& make) {
  std::vector<Count> counts;
  for (const auto& [n, mp1] : benchmark_grids()) counts.push_back(solve(make(mp1, n), Solver::Abac));
  return counts;
}

struct TimedSolve {
  Problem problem;
  AbacPreconditioner prec;
  FastBlttOperator fast;
  std::vector<double> rhs;

  explicit TimedSolve(const ProblemSpec& spec)
      : problem(build_problem(spec)),
        prec(build_abac(*problem.spectral, kAlpha)),
        fast(problem.spectral),
        rhs(time_reverse(problem.rhs, problem.spectral->modes(), problem.spectral->steps())) {}

  // Wall time per MINRES iteration over a fixed number of iterations.
  double per_iteration(std::size_t iterations) const {
    const LinearMap a = [this](std::span<const double> in, std::span<double> out) {
      fast.apply_symmetrized(in, out);
    };
    const LinearMap pinv = [this](std::span<const double> in, std::span<double> out) {
      prec.apply_inverse(in, out);
    };
    MinresConfig cfg;
    cfg.tol = std::numeric_limits<double>::min();
    cfg.max_iter = iterations;
    cfg.record_history = false;
    cfg.symmetry_probe = false;
    const auto res = minres_solve(a, pinv, rhs, cfg);
    return res.report.wall_time / static_cast<double>(std::max<std::size_t>(res.report.iterations, 1));
  }
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "BDF heat, Example 1, (32, 32)",
       [](Check& c) { criterion_heat(c, Family::HeatBdf, 65, true); }},
      {2, "CN heat, Example 1, (32, 32)",
       [](Check& c) { criterion_heat(c, Family::HeatCn, 66, false); }},
      {3, "variable-coefficient CN, Example 2",
       [](Check& c) {
         const Count base = solve(example2(32, 32), Solver::Abac);
         c.within("P_alpha(32,32)", base, 7, 13);
         c.flat("P_alpha(N=32,64)", {base, solve(example2(32, 64), Solver::Abac)}, 2);
       }},
      {4, "fractional L1, Example 3, gamma in {0.1, 0.5, 0.9}",
       [](Check& c) {
         for (double g : {0.1, 0.5, 0.9}) {
           const auto spec = example3(g, 32, 32);
           c.within("P_alpha(g=" + fmt(g) + ")", solve(spec, Solver::Abac), 1, 3);
           c.within("P_1(g=" + fmt(g) + ")", solve(spec, Solver::BlockCirculant), 4, 10);
         }
       }},
      {5, "fractional L1, Example 4, gamma in {0.3, 0.6, 0.9}",
       [](Check& c) {
         for (double g : {0.3, 0.6, 0.9}) {
           const Count base = solve(example4(g, 32, 32), Solver::Abac);
           c.within("P_alpha(g=" + fmt(g) + ")", base, 5, 11);
           c.flat("refine(g=" + fmt(g) + ")",
                  {base, solve(example4(g, 64, 32), Solver::Abac),
                   solve(example4(g, 32, 64), Solver::Abac),
                   solve(example4(g, 64, 64), Solver::Abac)},
                  2);
         }
       }},
      {6, "mesh independence at alpha = 1e-8 across the benchmark grids",
       [](Check& c) {
         c.flat("heat-bdf", sweep([](std::size_t m, std::size_t n) {
                  return example1(Family::HeatBdf, m, n);
                }), 2);
         c.flat("heat-cn", sweep([](std::size_t m, std::size_t n) {
                  return example1(Family::HeatCn, m, n);
                }), 2);
         c.flat("heat-var-cn", sweep([](std::size_t m, std::size_t n) { return example2(m, n); }), 2);
         c.flat("frac-l1(ex3)", sweep([](std::size_t m, std::size_t n) {
                  return example3(0.5, m, n);
                }), 2);
         c.flat("frac-l1(ex4)", sweep([](std::size_t m, std::size_t n) {
                  return example4(0.6, m, n);
                }), 2);
       }},
      {7, "oracle property suite, M*N <= 4096",
       [](Check& c) {
         PropertySuiteOptions opt;
         opt.sizes.push_back({8, 2, 16});
         const auto start = Clock::now();
         const auto results = run_property_suite(opt);
         const double secs = std::chrono::duration<double>(Clock::now() - start).count();
         const std::map<std::string, std::string> required{
             {"q-alpha-orthogonal", "a"},         {"sqrt-realness", "b"},
             {"y-sqrt-symmetry", "c"},            {"spectrum-inclusion", "d"},
             {"e-alpha-bound", "e"},              {"structured-matvec-vs-dense", "f"},
             {"preconditioner-vs-dense", "f"}};
         for (const auto& [name, tag] : required) {
           auto it = std::find_if(results.begin(), results.end(),
                                  [&](const PropertyResult& r) { return r.name == name; });
           const bool good = it != results.end() && it->passed;
           c.require("(" + tag + ")" + name, good,
                     it == results.end() ? "missing" : fmt(it->value, "%.2e"));
         }
         std::size_t failed = 0;
         for (const auto& r : results) failed += r.passed ? 0 : 1;
         c.require("all", failed == 0,
                   std::to_string(results.size() - failed) + "/" + std::to_string(results.size()));
         c.require("time_s", secs < 60.0, fmt(secs));
       }},
      {8, "per-iteration cost, N = 256 -> 512 at m+1 = 32",
       [](Check& c) {
         const TimedSolve small(example1(Family::HeatBdf, 32, 256));
         const TimedSolve large(example1(Family::HeatBdf, 32, 512));
         double t1 = std::numeric_limits<double>::infinity(), t2 = t1;
         // Interleaved repetitions, minimum per size.
         for (int r = 0; r < 7; ++r) {
           t1 = std::min(t1, small.per_iteration(10));
           t2 = std::min(t2, large.per_iteration(10));
         }
         const double ratio = t2 / t1;
         c.require("t256_ms", true, fmt(t1 * 1e3));
         c.require("t512_ms", true, fmt(t2 * 1e3));
         c.require("ratio", ratio <= 2.6, fmt(ratio));
       }},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    Check c;
    try {
      crit.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " error: " << e.what();
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << crit.id << ": " << crit.title
              << " |" << c.detail.str() << std::endl;
    if (!c.ok) ++failures;
  }
  std::cout << criteria.size() - failures << '/' << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
