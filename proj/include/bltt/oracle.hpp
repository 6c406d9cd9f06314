#pragma once

#include "bltt/operator.hpp"
#include "bltt/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bltt {

/// Largest M*N accepted by the dense reference computations.
inline constexpr std::size_t kOracleGuard = 4096;

/// Throws SizeGuardExceeded when M*N exceeds the guard.
void check_oracle_size(std::size_t modes, std::size_t steps);

/// Dense BLTT matrix with blocks U diag(lambda^{(k)}) U^T (time-major ordering).
Eigen::MatrixXd assemble_dense(const SpectralBlttOperator& op);
/// Dense BLTT matrix with blocks sum_j symbol_j[k] K_j.
Eigen::MatrixXd assemble_dense(const SparseBlttOperator& op);

/// Y = Y_N (x) I_M.
Eigen::MatrixXd dense_time_reversal(std::size_t modes, std::size_t steps);

/// Dense block C_alpha = I (x) A_(0) + sum_k H_alpha^{(k)} (x) A_(k), where
/// H_alpha^{(k)} has ones on the k-th subdiagonal and alpha on the
/// (N-k)-th superdiagonal.
Eigen::MatrixXd dense_alpha_circulant_matrix(const SpectralBlttOperator& op, double alpha);

/// The N x N alpha-circulant block of mode i, built from the entry pattern.
Eigen::MatrixXd dense_mode_circulant(const SpectralBlttOperator& op, std::size_t mode,
                                     double alpha);

struct DenseAlphaCirculant {
  Eigen::MatrixXd c;      ///< C_alpha
  Eigen::MatrixXd c_sqrt; ///< real part of the principal square root
  Eigen::MatrixXd p;      ///< |C_alpha| = (C^{1/2})^T C^{1/2}
  /// max |Im| / max |Re| over the entries of the complex square root.
  double sqrt_imag_residue = 0.0;
};

/// How the principal square root of a mode block is evaluated.
enum class RootMethod {
  Schur,       ///< complex Schur form (backward stable for every alpha)
  Eigenvector, ///< V diag(sqrt(lambda)) V^{-1}; loses about log10 cond(V) digits
};

/// Builds C_alpha from its tensor pattern and takes the principal square root
/// of every mode block. Throws SingularPreconditioner when a block has an
/// eigenvalue at zero or on the negative real axis.
DenseAlphaCirculant dense_alpha_circulant(const SpectralBlttOperator& op, double alpha,
                                          RootMethod method = RootMethod::Schur);

struct DenseBundle {
  double alpha = 1.0;
  std::size_t modes = 0;
  std::size_t steps = 0;
  Eigen::MatrixXd a;
  Eigen::MatrixXd ya;
  DenseAlphaCirculant circulant;
  Eigen::MatrixXd p_inv_half; ///< P_alpha^{-1/2}
  std::vector<double> preconditioned_spectrum; ///< ascending
};

DenseBundle make_dense_bundle(const SpectralBlttOperator& op, double alpha,
                              RootMethod method = RootMethod::Schur);

/// Sorted eigenvalues of P^{-1/2} Y A P^{-1/2}.
std::vector<double> preconditioned_spectrum(const DenseBundle& bundle);
/// Sorted eigenvalues of Q_alpha = P^{-1/2} Y C_alpha P^{-1/2}.
std::vector<double> q_alpha_spectrum(const DenseBundle& bundle);
/// ||E_alpha||_2 with E_alpha = P^{-1/2} Y (C_alpha - A) P^{-1/2}.
double e_alpha_norm(const DenseBundle& bundle);

/// Principal square root of the lower-triangular Toeplitz matrix T_i (first
/// column = the temporal symbol of mode i), by a dense Schur-based method.
Eigen::MatrixXd toeplitz_sqrt(std::span<const double> symbol);
/// Same square root from the power-series recurrence of its first column.
std::vector<double> toeplitz_sqrt_series(std::span<const double> symbol);

struct TheoryBounds {
  double alpha = 1.0;
  double delta = 0.5;
  double c0 = 0.0;
  double a0_norm = 0.0;      ///< ||A_(0)||_2 = max_i |lambda_i^{(0)}|
  double s_min_sq = 0.0;     ///< min_i lambda_min(S_i^T S_i)
  double s_norm = 0.0;       ///< max_i ||S_i||_2
  double mu = 0.0;           ///< 2 (||A_(0)|| - c0) / s_min_sq
  double mu_modes = 0.0;     ///< max_i 2 (lambda_i^{(0)} - c0) / s_min_sq
  double nu = 0.0;
  double zeta = 0.0;         ///< min(delta^2 / mu, nu)
  std::optional<double> e_norm; ///< ||E_alpha||_2 when a bundle was supplied
  bool alpha_within_nu() const { return alpha <= nu; }
};

TheoryBounds theory_bounds(const SpectralBlttOperator& op, double alpha, double delta,
                           const DenseBundle* bundle = nullptr);

/// Per-mode ||H_{alpha,i}||_2 and its bound alpha (lambda_i^{(0)} - c0).
struct HBoundRow {
  std::size_t mode = 0;
  double norm = 0.0;
  double bound = 0.0;
};
std::vector<HBoundRow> h_alpha_bounds(const SpectralBlttOperator& op, double alpha);

struct IterationBound {
  bool applicable = false;  ///< alpha <= zeta
  double rate = 0.0;        ///< sqrt(alpha * mu)
  std::size_t iterations = 0;
  std::string note;
};

/// Smallest k with 2 rate^{k-1} <= tol, rate = sqrt(alpha mu).
IterationBound iteration_bound_check(const TheoryBounds& bounds, double tol);

} // namespace bltt
