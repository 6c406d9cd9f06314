#include "test_util.hpp"

#include "bltt/transforms.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using bltt::Complex;

namespace {

std::vector<Complex> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

// F = N^{-1/2} [theta^{jk}], theta = exp(2 pi i / N).
Eigen::MatrixXcd defining_matrix(std::size_t n) {
  Eigen::MatrixXcd f(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      f(j, k) = std::polar(s, 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                  static_cast<double>(n));
  return f;
}

double max_abs_diff(const std::vector<Complex>& a, const Eigen::VectorXcd& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
  return d;
}

double norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Eigen::MatrixXd laplacian_2d(std::size_t m, double h) {
  const auto n = static_cast<Eigen::Index>(m * m);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const auto mi = static_cast<Eigen::Index>(m);
  for (Eigen::Index q = 0; q < mi; ++q)
    for (Eigen::Index p = 0; p < mi; ++p) {
      const Eigen::Index j = p + mi * q;
      l(j, j) = -4.0 / (h * h);
      if (p > 0) l(j, j - 1) = 1.0 / (h * h);
      if (p + 1 < mi) l(j, j + 1) = 1.0 / (h * h);
      if (q > 0) l(j, j - mi) = 1.0 / (h * h);
      if (q + 1 < mi) l(j, j + mi) = 1.0 / (h * h);
    }
  return l;
}

} // namespace

TEST_CASE("dft of length one is the identity") {
  bltt::DftPlan plan(1);
  const std::vector<Complex> v{{5.0, 0.0}};
  CHECK(plan.forward(v)[0] == Complex(5.0, 0.0));
  CHECK(plan.inverse(v)[0] == Complex(5.0, 0.0));
}

TEST_CASE("dft maps a constant pair to the scaled first mode") {
  bltt::DftPlan plan(2);
  const auto out = plan.forward(std::vector<Complex>{{1.0, 0.0}, {1.0, 0.0}});
  CHECK(std::abs(out[0] - Complex(std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(out[1]) < 1e-15);
}

TEST_CASE("forward dft matches the conjugate defining matrix") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {4u, 5u, 12u}) {
    const auto v = random_complex(n, rng);
    const Eigen::VectorXcd ref =
        defining_matrix(n).adjoint() * Eigen::Map<const Eigen::VectorXcd>(v.data(), n);
    CHECK(max_abs_diff(bltt::DftPlan(n).forward(v), ref) < 1e-13);
  }
}

TEST_CASE("inverse dft matches the dense inverse of the forward matrix") {
  std::mt19937_64 rng(12);
  const std::size_t n = 3;
  const auto v = random_complex(n, rng);
  const Eigen::MatrixXcd fwd = defining_matrix(n).adjoint();
  const Eigen::VectorXcd ref = fwd.inverse() * Eigen::Map<const Eigen::VectorXcd>(v.data(), n);
  CHECK(max_abs_diff(bltt::DftPlan(n).inverse(v), ref) < 1e-13);
}

TEST_CASE("dft is unitary and invertible") {
  std::mt19937_64 rng(13);
  for (std::size_t n : {1u, 2u, 7u, 16u, 33u}) {
    bltt::DftPlan plan(n);
    const auto v = random_complex(n, rng);
    const auto f = plan.forward(v);
    CHECK(std::abs(norm(f) - norm(v)) < 1e-13 * std::max(1.0, norm(v)));
    const auto back = plan.inverse(f);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(back[i] - v[i]));
    CHECK(d < 1e-14);
  }
}

TEST_CASE("batched dft equals separate transforms and allows in-place calls") {
  std::mt19937_64 rng(14);
  const std::size_t n = 6, batch = 3;
  const auto v = random_complex(n * batch, rng);
  bltt::DftPlan batched(n, batch), single(n);
  std::vector<Complex> out(v);
  batched.forward(out, out);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto ref = single.forward(std::span<const Complex>(v).subspan(b * n, n));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(out[b * n + i] - ref[i]) < 1e-15);
  }
}

TEST_CASE("dft of a conjugate-even sequence is real") {
  std::mt19937_64 rng(15);
  const std::size_t n = 10;
  auto v = random_complex(n, rng);
  v[0] = v[0].real();
  v[n / 2] = v[n / 2].real();
  for (std::size_t k = 1; k < n / 2; ++k) v[n - k] = std::conj(v[k]);
  for (const auto& z : bltt::DftPlan(n).forward(v)) CHECK(std::abs(z.imag()) < 1e-12);
}

TEST_CASE("dft rejects length mismatches") {
  bltt::DftPlan plan(4);
  CHECK_THROWS_AS(plan.forward(std::vector<Complex>(3)), std::invalid_argument);
  CHECK_THROWS_AS(bltt::DftPlan(0), std::invalid_argument);
}

TEST_CASE("dst of order one is a sign-preserving identity") {
  bltt::Dst1Plan plan(1, 1);
  const auto out = plan.apply(std::vector<double>{2.5});
  CHECK(std::abs(std::abs(out[0]) - 2.5) < 1e-15);
}

TEST_CASE("dst matches the normalized sine matrix") {
  std::mt19937_64 rng(21);
  const std::size_t m = 3;
  Eigen::MatrixXd s(m, m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      s(p, q) = std::sqrt(2.0 / (m + 1)) *
                std::sin(static_cast<double>((p + 1) * (q + 1)) * std::numbers::pi / (m + 1));
  const auto v = testing::random_vector(m, rng);
  const Eigen::VectorXd ref = s * testing::view(v);
  for (auto backend : {bltt::Dst1Backend::Native, bltt::Dst1Backend::OddExtension})
    CHECK(testing::rel_diff(bltt::Dst1Plan(m, 1, 1, backend).apply(v), ref) < 1e-14);

  const auto helper = bltt::dense_sine_matrix(m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      CHECK(std::abs(helper[p * m + q] - s(p, q)) < 1e-15);
}

TEST_CASE("two-dimensional dst diagonalizes the five-point laplacian") {
  const std::size_t m = 3;
  const double h = 0.25;
  bltt::Dst1Plan plan(m, 2, m * m);
  Eigen::MatrixXd l = laplacian_2d(m, h);
  // Columns of U are obtained by transforming unit vectors.
  std::vector<double> unit(m * m * m * m, 0.0);
  for (std::size_t j = 0; j < m * m; ++j) unit[j * m * m + j] = 1.0;
  const auto cols = plan.apply(unit);
  const Eigen::MatrixXd u = Eigen::Map<const Eigen::MatrixXd>(cols.data(), m * m, m * m);
  const Eigen::MatrixXd d = u.transpose() * l * u;
  const Eigen::MatrixXd off = d - Eigen::MatrixXd(d.diagonal().asDiagonal());
  CHECK(off.norm() < 1e-12 * d.norm());
}

TEST_CASE("dst backends agree and preserve norms") {
  std::mt19937_64 rng(22);
  for (int dims : {1, 2})
    for (std::size_t m : {1u, 4u, 7u, 16u}) {
      const std::size_t n = dims == 1 ? m : m * m;
      const auto v = testing::random_vector(n * 2, rng);
      const auto a = bltt::Dst1Plan(m, dims, 2, bltt::Dst1Backend::Native).apply(v);
      const auto b = bltt::Dst1Plan(m, dims, 2, bltt::Dst1Backend::OddExtension).apply(v);
      CHECK(testing::rel_diff(a, b) < 1e-12);
      CHECK(std::abs(testing::view(a).norm() - testing::view(v).norm()) <
            1e-13 * testing::view(v).norm());
      // U is involutory.
      CHECK(testing::rel_diff(bltt::Dst1Plan(m, dims, 2).apply(a), v) < 1e-13);
    }
}

TEST_CASE("dst rejects length mismatches and unsupported dimensions") {
  bltt::Dst1Plan plan(4, 1);
  CHECK_THROWS_AS(plan.apply(std::vector<double>(5)), std::invalid_argument);
  CHECK_THROWS_AS(bltt::Dst1Plan(4, 3), std::invalid_argument);
}

TEST_CASE("kron_reorder transposes the block index") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6}; // a1 a2 b1 b2 c1 c2
  const auto w = bltt::kron_reorder<double>(v, 2, 3, bltt::Reorder::ToModeMajor);
  CHECK(w == std::vector<double>{1, 3, 5, 2, 4, 6});
  CHECK(bltt::kron_reorder<double>(w, 2, 3, bltt::Reorder::ToTimeMajor) == v);

  CHECK(bltt::kron_reorder<double>(v, 1, 6, bltt::Reorder::ToModeMajor) == v);
  CHECK(bltt::kron_reorder<double>(v, 6, 1, bltt::Reorder::ToModeMajor) == v);
}

TEST_CASE("kron_reorder round trip is a permutation") {
  std::mt19937_64 rng(31);
  const auto v = testing::random_vector(32, rng);
  const auto w = bltt::kron_reorder<double>(v, 4, 8, bltt::Reorder::ToModeMajor);
  CHECK(bltt::kron_reorder<double>(w, 4, 8, bltt::Reorder::ToTimeMajor) == v);
  auto a = v, b = w;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK_THROWS_AS(bltt::kron_reorder<double>(v, 5, 7, bltt::Reorder::ToModeMajor),
                  std::invalid_argument);
}

TEST_CASE("alpha scaling entries are geometric and invertible") {
  bltt::AlphaScaling s(1e-8, 8);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(s.entries()[j] == doctest::Approx(std::pow(1e-8, j / 8.0)).epsilon(1e-13));
    CHECK(s.entries()[j] * s.inverse_entries()[j] == doctest::Approx(1.0).epsilon(1e-14));
  }
  std::vector<Complex> data(16, Complex(1.0, -2.0));
  s.apply(data);
  s.apply_inverse(data);
  for (const auto& z : data) CHECK(std::abs(z - Complex(1.0, -2.0)) < 1e-14);
  CHECK_THROWS_AS(bltt::AlphaScaling(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(bltt::AlphaScaling(1.5, 4), std::invalid_argument);
}
