#include "bltt/operator.hpp"

#include "bltt/errors.hpp"

#include "scratch.hpp"

#include <algorithm>
#include <cmath>

namespace bltt {

void time_reverse(std::span<const double> in, std::span<double> out, std::size_t modes,
                  std::size_t steps) {
  detail::require(in.size() == modes * steps && out.size() == modes * steps,
                  "time_reverse: vector length must equal M*N");
  if (in.data() == out.data()) {
    for (std::size_t n = 0; n < steps / 2; ++n) {
      std::swap_ranges(out.begin() + static_cast<std::ptrdiff_t>(n * modes),
                       out.begin() + static_cast<std::ptrdiff_t>((n + 1) * modes),
                       out.begin() + static_cast<std::ptrdiff_t>((steps - 1 - n) * modes));
    }
    return;
  }
  for (std::size_t n = 0; n < steps; ++n) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(n * modes), modes,
                out.begin() + static_cast<std::ptrdiff_t>((steps - 1 - n) * modes));
  }
}

std::vector<double> time_reverse(std::span<const double> v, std::size_t modes,
                                 std::size_t steps) {
  std::vector<double> out(v.size());
  time_reverse(v, out, modes, steps);
  return out;
}

namespace detail {

ToeplitzBatch::ToeplitzBatch(std::span<const double> symbols, std::size_t rows,
                             std::size_t steps, bool shared)
    : rows_(rows), steps_(steps), shared_(shared), dft_(2 * steps, rows) {
  const std::size_t count = shared ? 1 : rows;
  require(symbols.size() == count * steps, "ToeplitzBatch: symbol table has the wrong size");
  const std::size_t len = 2 * steps;
  // Eigenvalues of the length-2N circulant with first column (t, 0):
  // sqrt(2N) F^* (t, 0).
  std::vector<Complex> padded(len * count, Complex{});
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t k = 0; k < steps; ++k) padded[r * len + k] = symbols[r * steps + k];
  DftPlan plan(len, count);
  spectra_ = plan.forward(padded);
  const double s = std::sqrt(static_cast<double>(len));
  for (auto& z : spectra_) z *= s;
}

void ToeplitzBatch::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t len = 2 * steps_;
  require(in.size() == rows_ * steps_ && out.size() == rows_ * steps_,
          "ToeplitzBatch: vector length must equal rows*N");
  const auto work = scratch<Complex, 0>(rows_ * len);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < steps_; ++k) work[r * len + k] = in[r * steps_ + k];
    std::fill_n(work.begin() + static_cast<std::ptrdiff_t>(r * len + steps_), steps_, Complex{});
  }
  dft_.forward(work, work);
  for (std::size_t r = 0; r < rows_; ++r) {
    const Complex* lam = spectra_.data() + (shared_ ? 0 : r * len);
    Complex* w = work.data() + r * len;
    for (std::size_t k = 0; k < len; ++k) w[k] *= lam[k];
  }
  dft_.inverse(work, work);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < steps_; ++k) out[r * steps_ + k] = work[r * len + k].real();
}

} // namespace detail

FastBlttOperator::FastBlttOperator(std::shared_ptr<const SpectralBlttOperator> op)
    : op_(std::move(op)),
      dst_(op_->grid().plan(op_->steps())),
      toeplitz_(op_->table(), op_->modes(), op_->steps(), false) {}

void FastBlttOperator::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t m = op_->modes();
  const std::size_t n = op_->steps();
  detail::require(v.size() == m * n && out.size() == m * n,
                  "FastBlttOperator: vector length must equal M*N");
  const auto a = detail::scratch<double, 0>(m * n);
  const auto b = detail::scratch<double, 1>(m * n);
  dst_.apply(v, a);
  kron_reorder<double>(a, b, m, n, Reorder::ToModeMajor);
  toeplitz_.apply(b, b);
  kron_reorder<double>(b, a, m, n, Reorder::ToTimeMajor);
  dst_.apply(a, out);
}

void FastBlttOperator::apply_symmetrized(std::span<const double> v,
                                         std::span<double> out) const {
  apply(v, out);
  time_reverse(out, out, op_->modes(), op_->steps());
}

std::vector<double> bltt_matvec(const SpectralBlttOperator& op, std::span<const double> v) {
  FastBlttOperator fast(op);
  std::vector<double> out(v.size());
  fast.apply(v, out);
  return out;
}

std::vector<double> symmetrized_matvec(const SpectralBlttOperator& op,
                                       std::span<const double> v) {
  FastBlttOperator fast(op);
  std::vector<double> out(v.size());
  fast.apply_symmetrized(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// SparseBlttOperator

namespace {
// Symbols with at most this many nonzeros are convolved directly.
constexpr std::size_t kDirectConvolutionLength = 8;
} // namespace

SparseBlttOperator::SparseBlttOperator(std::size_t modes, std::size_t steps,
                                       std::vector<SparseTerm> terms, std::string note)
    : modes_(modes), steps_(steps), terms_(std::move(terms)), note_(std::move(note)) {
  detail::require(modes_ > 0 && steps_ > 0, "SparseBlttOperator: M and N must be positive");
  detail::require(!terms_.empty(), "SparseBlttOperator: at least one term is required");
  for (const auto& t : terms_) {
    detail::require(static_cast<std::size_t>(t.spatial.rows()) == modes_ &&
                        static_cast<std::size_t>(t.spatial.cols()) == modes_,
                    "SparseBlttOperator: spatial matrix must be M x M");
    detail::require(!t.symbol.empty() && t.symbol.size() <= steps_,
                    "SparseBlttOperator: symbol length must lie in [1, N]");
    const SparseMatrix diff = t.spatial - SparseMatrix(t.spatial.transpose());
    const double scale = std::max(t.spatial.norm(), 1e-300);
    detail::require(diff.norm() <= 1e-12 * scale,
                    "SparseBlttOperator: spatial matrix must be symmetric");

    Term p;
    p.spatial = t.spatial;
    p.symbol = t.symbol;
    while (p.symbol.size() > 1 && p.symbol.back() == 0.0) p.symbol.pop_back();
    if (p.symbol.size() > kDirectConvolutionLength) {
      std::vector<double> full(steps_, 0.0);
      std::copy(p.symbol.begin(), p.symbol.end(), full.begin());
      p.convolver = std::make_shared<const detail::ToeplitzBatch>(full, modes_, steps_, true);
    }
    prepared_.push_back(std::move(p));
  }
}

SparseMatrix SparseBlttOperator::block(std::size_t k) const {
  detail::require(k < steps_, "SparseBlttOperator::block: index out of range");
  SparseMatrix out(static_cast<Eigen::Index>(modes_), static_cast<Eigen::Index>(modes_));
  for (const auto& t : terms_) {
    if (k < t.symbol.size() && t.symbol[k] != 0.0) out += t.symbol[k] * t.spatial;
  }
  return out;
}

void SparseBlttOperator::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t total = modes_ * steps_;
  detail::require(v.size() == total && out.size() == total,
                  "SparseBlttOperator: vector length must equal M*N");
  const auto m = static_cast<Eigen::Index>(modes_);
  const auto n = static_cast<Eigen::Index>(steps_);
  // Time-major vectors viewed as M x N column-major matrices: column n is slice n.
  Eigen::Map<const Eigen::MatrixXd> vin(v.data(), m, n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, n);
  Eigen::MatrixXd w(m, n);
  const auto mm = detail::scratch<double, 2>(total);
  const auto tt = detail::scratch<double, 3>(total);

  for (const auto& t : prepared_) {
    w.noalias() = t.spatial * vin;
    if (t.convolver) {
      kron_reorder<double>(std::span<const double>(w.data(), total), mm, modes_, steps_,
                           Reorder::ToModeMajor);
      t.convolver->apply(mm, mm);
      kron_reorder<double>(std::span<const double>(mm), tt, modes_, steps_, Reorder::ToTimeMajor);
      acc += Eigen::Map<const Eigen::MatrixXd>(tt.data(), m, n);
    } else {
      const auto len = static_cast<Eigen::Index>(t.symbol.size());
      for (Eigen::Index j = 0; j < len; ++j) {
        const double c = t.symbol[static_cast<std::size_t>(j)];
        if (c == 0.0) continue;
        acc.rightCols(n - j) += c * w.leftCols(n - j);
      }
    }
  }
  Eigen::Map<Eigen::MatrixXd>(out.data(), m, n) = acc;
}

void SparseBlttOperator::apply_symmetrized(std::span<const double> v,
                                           std::span<double> out) const {
  apply(v, out);
  time_reverse(out, out, modes_, steps_);
}

} // namespace bltt
