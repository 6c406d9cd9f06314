#pragma once

#include "bltt/minres.hpp"
#include "bltt/problems.hpp"
#include "bltt/properties.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bltt::cli {

/// Malformed or invalid configuration; what() carries "file:line:column: message".
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Solver { Abac, BlockCirculant, None };

std::string_view to_string(Solver s);
/// Accepts "abac", "block-circulant", "none".
Solver parse_solver(std::string_view name);

/// Problem description; `example` selects one of the four named setups whose
/// fields the remaining keys then override.
struct ProblemConfig {
  std::optional<int> example;
  Family family = Family::HeatBdf;
  bool family_set = false;
  std::size_t m_plus_1 = 32;
  std::size_t steps = 32;
  double gamma = 0.5;
  std::optional<int> dims;
  std::optional<double> horizon;
  std::optional<std::pair<double, double>> domain;
  std::optional<Coefficient> coefficient;
  std::optional<HeatForcing> forcing;

  /// Resolved spec at the given grid size.
  ProblemSpec resolve(std::size_t m_plus_1, std::size_t steps) const;
  ProblemSpec resolve() const { return resolve(m_plus_1, steps); }
};

struct OutputConfig {
  std::string report;   ///< solve report (YAML); empty = stdout
  std::string history;  ///< residual history CSV
  std::string solution; ///< solution CSV
  std::string table;    ///< bench / spectrum CSV; empty = stdout
  std::string bounds;   ///< spectrum bounds CSV; empty = after the table
};

struct BenchConfig {
  std::vector<std::pair<std::size_t, std::size_t>> sizes; ///< (N, m+1)
  std::vector<Solver> solvers{Solver::Abac, Solver::BlockCirculant, Solver::None};
  std::size_t cap = 1000; ///< iteration counts above this print as "-"
  std::size_t parallel = 1;
};

struct SpectrumConfig {
  std::string operator_csv; ///< read the operator from here instead of `problem`
  double delta = 0.5;
};

struct OracleConfig {
  std::uint64_t seed = PropertySuiteOptions{}.seed;
  std::vector<SuiteSize> sizes = PropertySuiteOptions{}.sizes;
};

struct RunConfig {
  ProblemConfig problem;
  MinresConfig minres;
  Solver solver = Solver::Abac;
  double alpha = 1e-8;
  OutputConfig output;
  BenchConfig bench;
  SpectrumConfig spectrum;
  OracleConfig oracle;
};

/// Defaults used when no file is given: tolerance 1e-6, at most 1000
/// iterations, true relative residual, ABAC with alpha = 1e-8.
RunConfig default_config();

/// Parses a YAML configuration. Unknown keys and invalid values are errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");

/// Checks cross-field constraints (alpha range, positive tolerances, ...).
void validate(const RunConfig& cfg);

} // namespace bltt::cli
