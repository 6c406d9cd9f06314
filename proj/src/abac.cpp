#include "bltt/abac.hpp"

#include "bltt/errors.hpp"
#include "bltt/log.hpp"

#include "scratch.hpp"

#include <algorithm>

#include <cmath>
#include <sstream>

namespace bltt {

AlphaCirculantSpectrum build_alpha_spectrum(const SpectralBlttOperator& op, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("build_alpha_spectrum: alpha must lie in (0, 1]");
  }
  const auto report = check_admissible(op);
  if (!report.admissible) {
    std::ostringstream msg;
    msg << "operator '" << op.note() << "' is not admissible (c0 = " << report.c0
        << " at mode " << report.min_index << "); the preconditioner may be singular";
    warn(msg.str());
  }

  const std::size_t n = op.steps();
  const std::size_t m = op.modes();
  AlphaCirculantSpectrum spec{op.grid(), n, alpha, {}, AlphaScaling(alpha, n)};
  spec.eigs.assign(op.table().begin(), op.table().end());
  spec.scaling.apply(spec.eigs);
  DftPlan(n, m).forward(spec.eigs, spec.eigs);
  const double s = std::sqrt(static_cast<double>(n));
  for (auto& z : spec.eigs) z *= s;
  return spec;
}

double conjugate_symmetry_residue(const AlphaCirculantSpectrum& spec) {
  double worst = 0.0;
  const std::size_t n = spec.steps;
  for (std::size_t i = 0; i < spec.modes(); ++i) {
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(spec.eig(i, k)));
    if (scale == 0.0) continue;
    for (std::size_t q = 1; q < n; ++q) {
      const double r = std::abs(spec.eig(i, q) - std::conj(spec.eig(i, n - q))) / scale;
      worst = std::max(worst, r);
    }
  }
  return worst;
}

AbacPreconditioner::AbacPreconditioner(AlphaCirculantSpectrum spectrum)
    : spectrum_(std::move(spectrum)),
      dst_(spectrum_.grid.plan(spectrum_.steps)),
      dft_(spectrum_.steps, spectrum_.modes()) {
  detail::require(spectrum_.eigs.size() == spectrum_.modes() * spectrum_.steps,
                  "AbacPreconditioner: spectrum table has the wrong size");
  sqrt_eigs_.resize(spectrum_.eigs.size());
  for (std::size_t j = 0; j < sqrt_eigs_.size(); ++j) {
    const Complex z = spectrum_.eigs[j];
    if (std::abs(z) == 0.0 || (z.imag() == 0.0 && z.real() < 0.0) || !std::isfinite(std::abs(z))) {
      std::ostringstream msg;
      msg << "alpha-circulant eigenvalue " << z << " at mode " << j / spectrum_.steps
          << ", index " << j % spectrum_.steps
          << " has no principal square root off the branch cut";
      throw SingularPreconditioner(msg.str());
    }
    sqrt_eigs_[j] = std::sqrt(z);
  }
}

void AbacPreconditioner::per_mode(Half which, std::span<Complex> data) const {
  const auto& scaling = spectrum_.scaling;
  if (which == Half::Adjoint) {
    // D_alpha F conj(Lambda)^{-1/2} F^* D_alpha^{-1}
    scaling.apply_inverse(data);
    dft_.forward(data, data);
    for (std::size_t j = 0; j < data.size(); ++j) data[j] /= std::conj(sqrt_eigs_[j]);
    dft_.inverse(data, data);
    scaling.apply(data);
  } else {
    // D_alpha^{-1} F Lambda^{-1/2} F^* D_alpha
    scaling.apply(data);
    dft_.forward(data, data);
    for (std::size_t j = 0; j < data.size(); ++j) data[j] /= sqrt_eigs_[j];
    dft_.inverse(data, data);
    scaling.apply_inverse(data);
  }
}

double AbacPreconditioner::to_real(std::span<const Complex> data, std::span<double> out) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    out[j] = data[j].real();
    re += data[j].real() * data[j].real();
    im += data[j].imag() * data[j].imag();
  }
  const double total = re + im;
  const double residue = total > 0.0 ? std::sqrt(im / total) : 0.0;
  if (residue > kImagResidueHard) {
    std::ostringstream msg;
    msg << "preconditioner application left an imaginary residue of " << residue
        << " (limit " << kImagResidueHard << ")";
    throw NumericalBreakdown(msg.str());
  }
  return residue;
}

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(want) + ", got " + std::to_string(got));
  }
}

} // namespace

void AbacPreconditioner::apply_half_inverse_adjoint(std::span<const double> y,
                                                    std::span<double> out,
                                                    ApplyDiagnostics* diag) const {
  const std::size_t m = spectrum_.modes();
  const std::size_t n = spectrum_.steps;
  check_size(y.size(), m * n, "apply_half_inverse_adjoint");
  check_size(out.size(), m * n, "apply_half_inverse_adjoint");
  const auto a = detail::scratch<double, 0>(m * n);
  const auto b = detail::scratch<double, 1>(m * n);
  dst_.apply(y, a);
  kron_reorder<double>(a, b, m, n, Reorder::ToModeMajor);
  const auto w = detail::scratch<Complex, 1>(m * n);
  std::copy(b.begin(), b.end(), w.begin());
  per_mode(Half::Adjoint, w);
  const double residue = to_real(w, b);
  kron_reorder<double>(b, a, m, n, Reorder::ToTimeMajor);
  dst_.apply(a, out);
  if (diag) diag->imag_residue = residue;
}

void AbacPreconditioner::apply_half_inverse(std::span<const double> z, std::span<double> out,
                                            ApplyDiagnostics* diag) const {
  const std::size_t m = spectrum_.modes();
  const std::size_t n = spectrum_.steps;
  check_size(z.size(), m * n, "apply_half_inverse");
  check_size(out.size(), m * n, "apply_half_inverse");
  const auto a = detail::scratch<double, 0>(m * n);
  const auto b = detail::scratch<double, 1>(m * n);
  dst_.apply(z, a);
  kron_reorder<double>(a, b, m, n, Reorder::ToModeMajor);
  const auto w = detail::scratch<Complex, 1>(m * n);
  std::copy(b.begin(), b.end(), w.begin());
  per_mode(Half::Plain, w);
  const double residue = to_real(w, b);
  kron_reorder<double>(b, a, m, n, Reorder::ToTimeMajor);
  dst_.apply(a, out);
  if (diag) diag->imag_residue = residue;
}

void AbacPreconditioner::apply_inverse(std::span<const double> y, std::span<double> out,
                                       ApplyDiagnostics* diag) const {
  const std::size_t m = spectrum_.modes();
  const std::size_t n = spectrum_.steps;
  check_size(y.size(), m * n, "apply_preconditioner_inverse");
  check_size(out.size(), m * n, "apply_preconditioner_inverse");
  const auto a = detail::scratch<double, 0>(m * n);
  const auto b = detail::scratch<double, 1>(m * n);
  dst_.apply(y, a);
  kron_reorder<double>(a, b, m, n, Reorder::ToModeMajor);
  const auto w = detail::scratch<Complex, 1>(m * n);
  std::copy(b.begin(), b.end(), w.begin());
  per_mode(Half::Adjoint, w);
  const double first = to_real(w, b);
  std::copy(b.begin(), b.end(), w.begin());
  per_mode(Half::Plain, w);
  const double second = to_real(w, b);
  kron_reorder<double>(b, a, m, n, Reorder::ToTimeMajor);
  dst_.apply(a, out);
  if (diag) diag->imag_residue = std::max(first, second);
}

AbacPreconditioner sqrt_spectrum(AlphaCirculantSpectrum spec) {
  return AbacPreconditioner(std::move(spec));
}

AbacPreconditioner build_abac(const SpectralBlttOperator& op, double alpha) {
  return sqrt_spectrum(build_alpha_spectrum(op, alpha));
}

std::vector<double> apply_half_inverse_adjoint(const AbacPreconditioner& prec,
                                               std::span<const double> y) {
  std::vector<double> out(y.size());
  prec.apply_half_inverse_adjoint(y, out);
  return out;
}

std::vector<double> apply_half_inverse(const AbacPreconditioner& prec,
                                       std::span<const double> z) {
  std::vector<double> out(z.size());
  prec.apply_half_inverse(z, out);
  return out;
}

std::vector<double> apply_preconditioner_inverse(const AbacPreconditioner& prec,
                                                 std::span<const double> y) {
  std::vector<double> out(y.size());
  prec.apply_inverse(y, out);
  return out;
}

} // namespace bltt
