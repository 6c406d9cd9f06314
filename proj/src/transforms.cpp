#include "bltt/transforms.hpp"

#include "bltt/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace bltt {

namespace detail {

namespace {
std::atomic<Fault> g_fault{Fault::None};
}

void inject_fault(Fault f) { g_fault.store(f); }
Fault injected_fault() { return g_fault.load(); }

} // namespace detail

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(want) + ", got " +
                                std::to_string(got));
  }
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

// ---------------------------------------------------------------------------
// DftPlan

struct DftPlan::Impl {
  fftw_plan fwd_out = nullptr;
  fftw_plan fwd_in = nullptr;
  fftw_plan inv_out = nullptr;
  fftw_plan inv_in = nullptr;
  double scale = 1.0;

  Impl(std::size_t n, std::size_t howmany)
      : scale(detail::injected_fault() == detail::Fault::DftNormalization
                  ? 1.0
                  : 1.0 / std::sqrt(static_cast<double>(n))) {
    const int len = static_cast<int>(n);
    const int count = static_cast<int>(howmany);
    std::lock_guard lock(planner_mutex());
    auto* a = fftw_alloc_complex(n * howmany);
    auto* b = fftw_alloc_complex(n * howmany);
    auto make = [&](fftw_complex* in, fftw_complex* out, int sign) {
      return fftw_plan_many_dft(1, &len, count, in, nullptr, 1, len, out, nullptr, 1,
                                len, sign, kPlanFlags);
    };
    fwd_out = make(a, b, FFTW_FORWARD);
    fwd_in = make(a, a, FFTW_FORWARD);
    inv_out = make(a, b, FFTW_BACKWARD);
    inv_in = make(a, a, FFTW_BACKWARD);
    fftw_free(a);
    fftw_free(b);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    for (auto p : {fwd_out, fwd_in, inv_out, inv_in}) {
      if (p) fftw_destroy_plan(p);
    }
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

DftPlan::DftPlan(std::size_t length, std::size_t batch)
    : length_(length), batch_(batch) {
  detail::require(length > 0, "DftPlan: length must be positive");
  detail::require(batch > 0, "DftPlan: batch must be positive");
  impl_ = std::make_shared<const Impl>(length, batch);
}

void DftPlan::execute(bool forward_direction, std::span<const Complex> in,
                      std::span<Complex> out) const {
  const std::size_t total = length_ * batch_;
  check_length(in.size(), total, "dft");
  check_length(out.size(), total, "dft");
  const bool in_place = in.data() == out.data();
  fftw_plan plan = forward_direction ? (in_place ? impl_->fwd_in : impl_->fwd_out)
                                     : (in_place ? impl_->inv_in : impl_->inv_out);
  fftw_execute_dft(plan, as_fftw(const_cast<Complex*>(in.data())), as_fftw(out.data()));
  const double s = impl_->scale;
  for (auto& z : out) z *= s;
}

void DftPlan::forward(std::span<const Complex> in, std::span<Complex> out) const {
  execute(true, in, out);
}

void DftPlan::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  execute(false, in, out);
}

std::vector<Complex> DftPlan::forward(std::span<const Complex> in) const {
  std::vector<Complex> out(in.size());
  execute(true, in, out);
  return out;
}

std::vector<Complex> DftPlan::inverse(std::span<const Complex> in) const {
  std::vector<Complex> out(in.size());
  execute(false, in, out);
  return out;
}

// ---------------------------------------------------------------------------
// Dst1Plan

struct Dst1Plan::Impl {
  fftw_plan out_of_place = nullptr;
  fftw_plan in_place = nullptr;
  std::shared_ptr<const DftPlan> line_dft; // odd-extension backend only
  double scale = 1.0;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (out_of_place) fftw_destroy_plan(out_of_place);
    if (in_place) fftw_destroy_plan(in_place);
  }
};

Dst1Plan::Dst1Plan(std::size_t m, int dims, std::size_t batch, Dst1Backend backend)
    : m_(m), dims_(dims), size_(0), batch_(batch), backend_(backend) {
  detail::require(m > 0, "Dst1Plan: m must be positive");
  detail::require(dims == 1 || dims == 2, "Dst1Plan: only 1 or 2 dimensions are supported");
  detail::require(batch > 0, "Dst1Plan: batch must be positive");
  size_ = dims == 1 ? m : m * m;

  auto impl = std::make_shared<Impl>();
  if (backend == Dst1Backend::Native) {
    // RODFT00 computes 2 * sum x_j sin(pi (j+1)(k+1)/(m+1)) per dimension.
    impl->scale = std::pow(1.0 / std::sqrt(2.0 * static_cast<double>(m + 1)), dims);
    const int n[2] = {static_cast<int>(m), static_cast<int>(m)};
    const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};
    const int dist = static_cast<int>(size_);
    std::lock_guard lock(planner_mutex());
    double* a = fftw_alloc_real(size_ * batch);
    double* b = fftw_alloc_real(size_ * batch);
    impl->out_of_place = fftw_plan_many_r2r(dims, n, static_cast<int>(batch), a, nullptr, 1,
                                            dist, b, nullptr, 1, dist, kinds, kPlanFlags);
    impl->in_place = fftw_plan_many_r2r(dims, n, static_cast<int>(batch), a, nullptr, 1, dist,
                                        a, nullptr, 1, dist, kinds, kPlanFlags);
    fftw_free(a);
    fftw_free(b);
  } else {
    impl->line_dft = std::make_shared<const DftPlan>(2 * (m + 1));
  }
  impl_ = std::move(impl);
}

void Dst1Plan::apply(std::span<const double> in, std::span<double> out) const {
  check_length(in.size(), size_ * batch_, "dst1");
  check_length(out.size(), size_ * batch_, "dst1");
  if (backend_ == Dst1Backend::OddExtension) {
    apply_odd_extension(in, out);
    return;
  }
  fftw_plan plan = in.data() == out.data() ? impl_->in_place : impl_->out_of_place;
  fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
  const double s = impl_->scale;
  for (auto& x : out) x *= s;
}

std::vector<double> Dst1Plan::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

void Dst1Plan::apply_odd_extension(std::span<const double> in, std::span<double> out) const {
  // With the unitary forward DFT of the odd extension
  // (0, x_1..x_m, 0, -x_m..-x_1), the orthonormal DST-I coefficient k equals
  // -Im(X_k).
  const std::size_t m = m_;
  const std::size_t len = 2 * (m + 1);
  const DftPlan& dft = *impl_->line_dft;
  std::vector<Complex> ext(len);
  std::vector<Complex> spec(len);
  std::vector<double> work(in.begin(), in.end());

  auto transform_lines = [&](std::size_t offset, std::size_t stride, std::size_t count,
                             std::size_t line_step) {
    for (std::size_t line = 0; line < count; ++line) {
      const std::size_t base = offset + line * line_step;
      std::fill(ext.begin(), ext.end(), Complex{});
      for (std::size_t j = 0; j < m; ++j) {
        const double x = work[base + j * stride];
        ext[j + 1] = x;
        ext[len - 1 - j] = -x;
      }
      dft.forward(ext, spec);
      for (std::size_t k = 0; k < m; ++k) work[base + k * stride] = -spec[k + 1].imag();
    }
  };

  for (std::size_t b = 0; b < batch_; ++b) {
    const std::size_t offset = b * size_;
    if (dims_ == 1) {
      transform_lines(offset, 1, 1, 0);
    } else {
      transform_lines(offset, 1, m, m); // along the fast coordinate
      transform_lines(offset, m, m, 1); // along the slow coordinate
    }
  }
  std::copy(work.begin(), work.end(), out.begin());
}

// ---------------------------------------------------------------------------
// AlphaScaling

AlphaScaling::AlphaScaling(double alpha, std::size_t length) : alpha_(alpha) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "AlphaScaling: alpha must lie in (0, 1]");
  detail::require(length > 0, "AlphaScaling: length must be positive");
  entries_.resize(length);
  inverse_.resize(length);
  const double log_alpha = std::log(alpha);
  const double n = static_cast<double>(length);
  for (std::size_t j = 0; j < length; ++j) {
    const double e = (static_cast<double>(j) / n) * log_alpha;
    entries_[j] = std::exp(e);
    inverse_[j] = std::exp(-e);
  }
}

void AlphaScaling::apply(std::span<Complex> data) const {
  const std::size_t n = entries_.size();
  detail::require(data.size() % n == 0, "AlphaScaling: data length is not a multiple of N");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= entries_[i % n];
}

void AlphaScaling::apply_inverse(std::span<Complex> data) const {
  const std::size_t n = inverse_.size();
  detail::require(data.size() % n == 0, "AlphaScaling: data length is not a multiple of N");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= inverse_[i % n];
}

// ---------------------------------------------------------------------------
// Kronecker reordering

template <typename T>
void kron_reorder(std::span<const T> in, std::span<T> out, std::size_t modes,
                  std::size_t steps, Reorder direction) {
  detail::require(modes > 0 && steps > 0, "kron_reorder: M and N must be positive");
  if (in.size() != modes * steps || out.size() != modes * steps) {
    throw std::invalid_argument("kron_reorder: length " + std::to_string(in.size()) +
                                " does not match M*N = " + std::to_string(modes * steps));
  }
  // Tiled transpose of a rows x cols row-major array.
  const std::size_t rows = direction == Reorder::ToModeMajor ? steps : modes;
  const std::size_t cols = direction == Reorder::ToModeMajor ? modes : steps;
  constexpr std::size_t tile = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += tile) {
    const std::size_t r1 = std::min(rows, r0 + tile);
    for (std::size_t c0 = 0; c0 < cols; c0 += tile) {
      const std::size_t c1 = std::min(cols, c0 + tile);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) out[c * rows + r] = in[r * cols + c];
    }
  }
}

template void kron_reorder<double>(std::span<const double>, std::span<double>, std::size_t,
                                   std::size_t, Reorder);
template void kron_reorder<Complex>(std::span<const Complex>, std::span<Complex>, std::size_t,
                                    std::size_t, Reorder);

std::vector<double> dense_sine_matrix(std::size_t m) {
  std::vector<double> s(m * m);
  const double c = std::sqrt(2.0 / static_cast<double>(m + 1));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      s[p * m + q] = c * std::sin(static_cast<double>((p + 1) * (q + 1)) * std::numbers::pi /
                                  static_cast<double>(m + 1));
  return s;
}

} // namespace bltt
