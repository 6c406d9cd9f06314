#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bltt {

using Complex = std::complex<double>;

namespace detail {

/// Deliberate defects for exercising the property suite.
enum class Fault {
  None,
  DftNormalization, ///< DFT plans built afterwards omit the 1/sqrt(N) factor
};

/// Process-wide; affects plans constructed after the call.
void inject_fault(Fault f);
Fault injected_fault();

} // namespace detail

/// Unitary discrete Fourier transform of a fixed length, optionally batched
/// over `batch` contiguous vectors.
///
/// Convention (used everywhere in the library): with
/// F = N^{-1/2} [theta^{(i-1)(j-1)}], theta = exp(2*pi*i/N),
///
///   forward(v) = F^* v   (kernel exp(-2*pi*i*jk/N) / sqrt(N))
///   inverse(v) = F   v   (kernel exp(+2*pi*i*jk/N) / sqrt(N))
///
/// so that sqrt(N) * forward(c) lists the eigenvalues of the circulant
/// matrix with first column c.
///
/// Plans are immutable after construction and may be shared by concurrent
/// callers; in-place and out-of-place calls are both supported.
class DftPlan {
public:
  explicit DftPlan(std::size_t length, std::size_t batch = 1);

  std::size_t length() const noexcept { return length_; }
  std::size_t batch() const noexcept { return batch_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

  std::vector<Complex> forward(std::span<const Complex> in) const;
  std::vector<Complex> inverse(std::span<const Complex> in) const;

private:
  struct Impl;
  std::size_t length_;
  std::size_t batch_;
  std::shared_ptr<const Impl> impl_;

  void execute(bool forward_direction, std::span<const Complex> in,
               std::span<Complex> out) const;
};

/// How the sine transform is evaluated.
enum class Dst1Backend {
  Native,       ///< FFTW real-to-real RODFT00
  OddExtension, ///< complex FFT of the odd extension, length 2(m+1)
};

/// Orthonormal d-dimensional DST-I on m^d points, optionally batched over
/// `batch` contiguous slices. Entries of the 1-D matrix are
/// sqrt(2/(m+1)) * sin(p*q*pi/(m+1)); the matrix is symmetric and
/// involutory, so apply() computes both U and U^T.
///
/// The d-dimensional layout is lexicographic with the first coordinate
/// running fastest.
class Dst1Plan {
public:
  Dst1Plan(std::size_t m, int dims, std::size_t batch = 1,
           Dst1Backend backend = Dst1Backend::Native);

  std::size_t points_per_dim() const noexcept { return m_; }
  int dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t batch() const noexcept { return batch_; }
  Dst1Backend backend() const noexcept { return backend_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;

private:
  struct Impl;
  std::size_t m_;
  int dims_;
  std::size_t size_;
  std::size_t batch_;
  Dst1Backend backend_;
  std::shared_ptr<const Impl> impl_;

  void apply_odd_extension(std::span<const double> in, std::span<double> out) const;
};

/// Geometric scaling D_alpha = diag(alpha^{(j-1)/N}), j = 1..N.
class AlphaScaling {
public:
  AlphaScaling(double alpha, std::size_t length);

  double alpha() const noexcept { return alpha_; }
  std::size_t length() const noexcept { return entries_.size(); }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> inverse_entries() const noexcept { return inverse_; }

  /// Multiplies each of the contiguous length-N vectors in `data` by D_alpha.
  void apply(std::span<Complex> data) const;
  /// Multiplies each of the contiguous length-N vectors in `data` by D_alpha^{-1}.
  void apply_inverse(std::span<Complex> data) const;

private:
  double alpha_;
  std::vector<double> entries_;
  std::vector<double> inverse_;
};

/// Direction of the Kronecker reordering Pi.
enum class Reorder {
  ToModeMajor, ///< N blocks of length M  ->  M blocks of length N  (Pi^T)
  ToTimeMajor, ///< M blocks of length N  ->  N blocks of length M  (Pi)
};

/// Index-map permutation between the time-major layout v[n*M + i] and the
/// mode-major layout w[i*N + n]. `in` and `out` must not alias.
template <typename T>
void kron_reorder(std::span<const T> in, std::span<T> out, std::size_t modes,
                  std::size_t steps, Reorder direction);

template <typename T>
std::vector<T> kron_reorder(std::span<const T> in, std::size_t modes,
                            std::size_t steps, Reorder direction) {
  std::vector<T> out(in.size());
  kron_reorder<T>(in, out, modes, steps, direction);
  return out;
}

/// Dense normalized sine matrix of order m (test and oracle helper).
std::vector<double> dense_sine_matrix(std::size_t m);

} // namespace bltt
