#pragma once

#include "bltt/spectral.hpp"
#include "bltt/transforms.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bltt {

/// Eigenvalues lambda_i^{(k,alpha)} of the alpha-circulant blocks, stored
/// mode-major (entry (i, k) at i*N + k, k zero-based).
struct AlphaCirculantSpectrum {
  SpatialGrid grid;
  std::size_t steps = 0;
  double alpha = 1.0;
  std::vector<Complex> eigs;
  AlphaScaling scaling{1.0, 1};

  std::size_t modes() const noexcept { return grid.size(); }
  Complex eig(std::size_t mode, std::size_t k) const { return eigs[mode * steps + k]; }
};

/// For each mode, sqrt(N) * F^* D_alpha (lambda_i^{(0)}, ..., lambda_i^{(N-1)}).
/// Emits a warning when the operator is not admissible (c0 <= 0).
AlphaCirculantSpectrum build_alpha_spectrum(const SpectralBlttOperator& op, double alpha);

/// Largest relative deviation from lambda^{(q)} = conj(lambda^{(N-q)}), q = 1..N-1.
double conjugate_symmetry_residue(const AlphaCirculantSpectrum& spec);

/// Per-call diagnostics of a half-inverse application.
struct ApplyDiagnostics {
  /// ||Im w|| / ||w|| of the complex result before the imaginary part is dropped.
  double imag_residue = 0.0;
};

/// Imaginary residue above which an application is reported as a breakdown.
inline constexpr double kImagResidueHard = 1e-8;
/// Imaginary residue expected in well-conditioned use.
inline constexpr double kImagResidueSoft = 1e-11;

/// P_alpha = |C_alpha| with its principal-branch square-rooted spectrum.
/// Immutable after construction; the apply methods are reentrant.
class AbacPreconditioner {
public:
  explicit AbacPreconditioner(AlphaCirculantSpectrum spectrum);

  const AlphaCirculantSpectrum& spectrum() const noexcept { return spectrum_; }
  std::span<const Complex> sqrt_eigs() const noexcept { return sqrt_eigs_; }
  std::size_t size() const noexcept { return spectrum_.modes() * spectrum_.steps; }

  /// out = (C_alpha^{-1/2})^* y.
  void apply_half_inverse_adjoint(std::span<const double> y, std::span<double> out,
                                  ApplyDiagnostics* diag = nullptr) const;
  /// out = C_alpha^{-1/2} z.
  void apply_half_inverse(std::span<const double> z, std::span<double> out,
                          ApplyDiagnostics* diag = nullptr) const;
  /// out = P_alpha^{-1} y = C_alpha^{-1/2} (C_alpha^{-1/2})^* y. The spatial
  /// transforms between the two halves cancel and are skipped.
  void apply_inverse(std::span<const double> y, std::span<double> out,
                     ApplyDiagnostics* diag = nullptr) const;

private:
  enum class Half { Adjoint, Plain };
  void per_mode(Half which, std::span<Complex> data) const;
  double to_real(std::span<const Complex> data, std::span<double> out) const;

  AlphaCirculantSpectrum spectrum_;
  std::vector<Complex> sqrt_eigs_;
  Dst1Plan dst_;
  DftPlan dft_;
};

/// Entrywise principal square root. Throws SingularPreconditioner when an
/// eigenvalue is zero or lies on the negative real axis.
AbacPreconditioner sqrt_spectrum(AlphaCirculantSpectrum spec);

/// build_alpha_spectrum followed by sqrt_spectrum.
AbacPreconditioner build_abac(const SpectralBlttOperator& op, double alpha);

std::vector<double> apply_half_inverse_adjoint(const AbacPreconditioner& prec,
                                               std::span<const double> y);
std::vector<double> apply_half_inverse(const AbacPreconditioner& prec,
                                       std::span<const double> z);
std::vector<double> apply_preconditioner_inverse(const AbacPreconditioner& prec,
                                                 std::span<const double> y);

} // namespace bltt
