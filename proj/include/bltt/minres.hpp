#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bltt {

/// out = L(in); buffers are caller-owned and of equal length.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

enum class ResidualConvention {
  PreconditionedRelative, ///< ||P^{-1} r_k||_2 / ||P^{-1} b||_2
  PreconditionedAbsolute, ///< ||P^{-1} r_k||_2
  TrueRelative,           ///< ||r_k||_2 / ||b||_2
};

std::string_view to_string(ResidualConvention c);
/// Accepts "preconditioned-relative", "preconditioned-absolute", "true-relative".
ResidualConvention parse_residual_convention(std::string_view name);

struct MinresConfig {
  double tol = 1e-6;
  std::size_t max_iter = 1000;
  ResidualConvention convention = ResidualConvention::PreconditionedRelative;
  bool record_history = true;
  /// Randomized check <Au, v> = <u, Av> before iterating (two extra products).
  bool symmetry_probe = true;
  double symmetry_tol = 1e-8;
  std::uint64_t probe_seed = 0x5eed;
};

struct MinresReport {
  std::size_t iterations = 0;
  bool converged = false;
  /// Lanczos produced beta = 0 (the Krylov space is invariant).
  bool krylov_exhausted = false;
  /// Monitored norm after each iteration, per the configured convention.
  std::vector<double> residual_history;
  /// ||r_k||_{P^{-1}} / ||b||_{P^{-1}}, the quantity MINRES minimizes.
  std::vector<double> natural_history;
  double final_monitored = 0.0;
  /// ||b - A x||_2 / ||b||_2 from an explicit product at the end.
  double final_true_residual = 0.0;
  double wall_time = 0.0;
};

struct MinresResult {
  std::vector<double> x;
  MinresReport report;
};

/// Preconditioned MINRES for a symmetric (possibly indefinite) A with an
/// SPD preconditioner given through its inverse. An empty `prec_inv` means
/// no preconditioning.
///
/// Throws ContractViolation when the symmetry probe fails and NotSpd when
/// a P^{-1}-inner product is not positive. Hitting max_iter is reported
/// through `converged = false`.
MinresResult minres_solve(const LinearMap& matvec, const LinearMap& prec_inv,
                          std::span<const double> rhs, const MinresConfig& cfg = {},
                          std::optional<std::span<const double>> x0 = std::nullopt);

} // namespace bltt
