#pragma once

#include "bltt/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bltt {

/// Outcome of one named property, aggregated over all cases that exercise it.
struct PropertyResult {
  std::string name;
  bool passed = true;
  double value = 0.0;     ///< worst observed measure
  double threshold = 0.0; ///< pass iff value <= threshold
  std::size_t cases = 0;
  std::string detail;     ///< case that produced the worst value, or the error
};

struct SuiteSize {
  std::size_t m = 4;
  int dims = 1;
  std::size_t steps = 8;
};

struct PropertySuiteOptions {
  std::uint64_t seed = 20240601;
  /// Grids for the randomized admissible operators; M*N must stay within the oracle guard.
  std::vector<SuiteSize> sizes{{4, 1, 8}, {3, 2, 8}, {2, 2, 16}, {6, 1, 32}, {4, 2, 16}};
};

/// Random operator with lambda_i^{(k)} ~ U(-1, 1) for k >= 1 and
/// lambda_i^{(0)} = sum_k |lambda_i^{(k)}| + c, c ~ U(0.5, 2).
SpectralBlttOperator random_admissible_operator(const SuiteSize& size, std::mt19937_64& rng);

/// Runs every property of the transform, operator, preconditioner, solver and
/// oracle layers. Deterministic for a fixed seed.
std::vector<PropertyResult> run_property_suite(const PropertySuiteOptions& options = {});

bool all_passed(const std::vector<PropertyResult>& results);

} // namespace bltt
