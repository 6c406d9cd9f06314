#pragma once

#include "bltt/spectral.hpp"
#include "bltt/transforms.hpp"

#include <Eigen/Sparse>

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bltt {

/// Applies the time-reversing permutation Y = Y_N (x) I_M: the order of the
/// N time blocks (each of length M) is reversed. `in` and `out` may alias.
void time_reverse(std::span<const double> in, std::span<double> out, std::size_t modes,
                  std::size_t steps);
std::vector<double> time_reverse(std::span<const double> v, std::size_t modes,
                                 std::size_t steps);

namespace detail {

/// Batch of lower-triangular Toeplitz products in mode-major layout, each
/// evaluated through a zero-padded circulant embedding of length 2N.
class ToeplitzBatch {
public:
  /// `symbols` holds `rows` contiguous symbols of length N, or a single
  /// symbol shared by every row when `shared` is true.
  ToeplitzBatch(std::span<const double> symbols, std::size_t rows, std::size_t steps,
                bool shared);

  /// out = T_r in for every row r; in/out are rows*N, mode-major; may alias.
  void apply(std::span<const double> in, std::span<double> out) const;

private:
  std::size_t rows_;
  std::size_t steps_;
  bool shared_;
  DftPlan dft_; // length 2N, batch = rows
  std::vector<Complex> spectra_;
};

} // namespace detail

/// Fast y = A v for a spectral BLTT operator. Vectors are time-major
/// (v[n*M + i]) at the interface; the product is evaluated as
/// (I (x) U) Pi [per-mode Toeplitz] Pi^T (I (x) U)^T v.
class FastBlttOperator {
public:
  explicit FastBlttOperator(std::shared_ptr<const SpectralBlttOperator> op);
  explicit FastBlttOperator(const SpectralBlttOperator& op)
      : FastBlttOperator(std::make_shared<const SpectralBlttOperator>(op)) {}

  const SpectralBlttOperator& spectral() const noexcept { return *op_; }
  std::size_t size() const noexcept { return op_->size(); }

  void apply(std::span<const double> v, std::span<double> out) const;
  /// out = Y A v.
  void apply_symmetrized(std::span<const double> v, std::span<double> out) const;

private:
  std::shared_ptr<const SpectralBlttOperator> op_;
  Dst1Plan dst_;
  detail::ToeplitzBatch toeplitz_;
};

std::vector<double> bltt_matvec(const SpectralBlttOperator& op, std::span<const double> v);
std::vector<double> symmetrized_matvec(const SpectralBlttOperator& op,
                                       std::span<const double> v);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One Kronecker term T(symbol) (x) K of a sparse-block BLTT operator, where
/// T(symbol) is the N x N lower-triangular Toeplitz matrix with first column
/// `symbol` (zero-padded to N) and K is a symmetric M x M sparse matrix.
struct SparseTerm {
  std::vector<double> symbol;
  SparseMatrix spatial;
};

/// BLTT operator A = sum_j T(symbol_j) (x) K_j evaluated without a common
/// eigenbasis: a sparse spatial product per time slice followed by a scalar
/// Toeplitz convolution in time. Blocks are A_(k) = sum_j symbol_j[k] K_j.
class SparseBlttOperator {
public:
  SparseBlttOperator(std::size_t modes, std::size_t steps, std::vector<SparseTerm> terms,
                     std::string note = {});

  std::size_t modes() const noexcept { return modes_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return modes_ * steps_; }
  const std::vector<SparseTerm>& terms() const noexcept { return terms_; }
  const std::string& note() const noexcept { return note_; }

  /// Sparse block A_(k).
  SparseMatrix block(std::size_t k) const;

  void apply(std::span<const double> v, std::span<double> out) const;
  void apply_symmetrized(std::span<const double> v, std::span<double> out) const;

private:
  struct Term {
    SparseMatrix spatial;
    std::vector<double> symbol; // trimmed to its last nonzero
    std::shared_ptr<const detail::ToeplitzBatch> convolver; // only for long symbols
  };

  std::size_t modes_;
  std::size_t steps_;
  std::vector<SparseTerm> terms_;
  std::vector<Term> prepared_;
  std::string note_;
};

} // namespace bltt
