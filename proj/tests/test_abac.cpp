#include "test_util.hpp"

#include "bltt/abac.hpp"
#include "bltt/errors.hpp"
#include "bltt/log.hpp"
#include "bltt/oracle.hpp"
#include "bltt/properties.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using bltt::Complex;

TEST_CASE("alpha = 1 spectrum of a 2x2 circulant") {
  const bltt::SpectralBlttOperator op({1, 1}, 2, {2.0, -1.0});
  const auto spec = bltt::build_alpha_spectrum(op, 1.0);
  CHECK(std::abs(spec.eig(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(spec.eig(0, 1) - Complex(3.0, 0.0)) < 1e-14);
}

TEST_CASE("single step spectrum is the first block") {
  const bltt::SpectralBlttOperator op({3, 1}, 1, {1.5, 2.0, 7.0});
  for (double alpha : {1.0, 0.3, 1e-8}) {
    const auto spec = bltt::build_alpha_spectrum(op, alpha);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(spec.eig(i, 0) - op.eig(i, 0)) < 1e-15);
  }
}

TEST_CASE("alpha spectrum matches the dense alpha-circulant eigenvalues") {
  std::mt19937_64 rng(41);
  const auto op = bltt::random_admissible_operator({2, 1, 8}, rng);
  const double alpha = 1e-2;
  const auto spec = bltt::build_alpha_spectrum(op, alpha);
  for (std::size_t i = 0; i < 2; ++i) {
    const Eigen::VectorXcd dense =
        Eigen::ComplexEigenSolver<Eigen::MatrixXd>(bltt::dense_mode_circulant(op, i, alpha))
            .eigenvalues();
    // Match each fast eigenvalue to its nearest dense eigenvalue.
    double worst = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      double best = 1e300;
      for (Eigen::Index j = 0; j < dense.size(); ++j)
        best = std::min(best, std::abs(dense(j) - spec.eig(i, k)));
      worst = std::max(worst, best / std::abs(spec.eig(i, k)));
    }
    CHECK(worst < 1e-10);
  }
  CHECK(bltt::conjugate_symmetry_residue(spec) <= 1e-12);
}

TEST_CASE("alpha outside (0, 1] is rejected") {
  const auto op = bltt::SpectralBlttOperator::identity({2, 1}, 2);
  CHECK_THROWS_AS(bltt::build_alpha_spectrum(op, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bltt::build_alpha_spectrum(op, 1.01), std::invalid_argument);
  CHECK_THROWS_AS(bltt::build_alpha_spectrum(op, -0.5), std::invalid_argument);
}

TEST_CASE("principal square roots") {
  auto make = [](Complex lambda) {
    bltt::AlphaCirculantSpectrum s;
    s.grid = {1, 1};
    s.steps = 1;
    s.alpha = 1.0;
    s.eigs = {lambda};
    return s;
  };
  CHECK(std::abs(bltt::sqrt_spectrum(make(4.0)).sqrt_eigs()[0] - Complex(2.0, 0.0)) < 1e-15);
  const Complex r = bltt::sqrt_spectrum(make({0.0, 1.0})).sqrt_eigs()[0];
  CHECK(std::abs(r - Complex(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(bltt::sqrt_spectrum(make({-1.0, 0.0})), bltt::SingularPreconditioner);
  CHECK_THROWS_AS(bltt::sqrt_spectrum(make({0.0, 0.0})), bltt::SingularPreconditioner);
}

TEST_CASE("square roots have positive real part and matching modulus") {
  std::mt19937_64 rng(42);
  const auto op = bltt::random_admissible_operator({4, 2, 16}, rng);
  const auto prec = bltt::build_abac(op, 1e-8);
  const auto& eigs = prec.spectrum().eigs;
  for (std::size_t j = 0; j < eigs.size(); ++j) {
    const Complex s = prec.sqrt_eigs()[j];
    CHECK(s.real() > 0.0);
    CHECK(std::abs(std::norm(s) - std::abs(eigs[j])) <= 1e-13 * std::abs(eigs[j]));
  }
}

TEST_CASE("identity operator with alpha = 1 gives the identity preconditioner") {
  std::mt19937_64 rng(43);
  const auto prec = bltt::build_abac(bltt::SpectralBlttOperator::identity({3, 1}, 4), 1.0);
  const auto y = testing::random_vector(12, rng);
  CHECK(testing::rel_diff(bltt::apply_half_inverse_adjoint(prec, y), y) < 1e-14);
  CHECK(testing::rel_diff(bltt::apply_half_inverse(prec, y), y) < 1e-14);
  CHECK(testing::rel_diff(bltt::apply_preconditioner_inverse(prec, y), y) < 1e-14);
}

TEST_CASE("half inverses match the dense square root") {
  std::mt19937_64 rng(44);
  for (const bltt::SuiteSize s : {bltt::SuiteSize{1, 1, 4}, bltt::SuiteSize{1, 1, 2},
                                  bltt::SuiteSize{3, 1, 8}}) {
    const auto op = bltt::random_admissible_operator(s, rng);
    const double alpha = 0.5;
    const auto prec = bltt::build_abac(op, alpha);
    const auto dense = bltt::dense_alpha_circulant(op, alpha);
    const auto y = testing::random_vector(op.size(), rng);
    const Eigen::MatrixXd inv_sqrt = dense.c_sqrt.inverse();

    const Eigen::VectorXd adj_ref = inv_sqrt.transpose() * testing::view(y);
    CHECK(testing::rel_diff(bltt::apply_half_inverse_adjoint(prec, y), adj_ref) < 1e-10);

    bltt::ApplyDiagnostics diag;
    std::vector<double> out(op.size());
    prec.apply_half_inverse(y, out, &diag);
    const Eigen::VectorXd ref = inv_sqrt * testing::view(y);
    CHECK(testing::rel_diff(out, ref) < 1e-10);
    CHECK(diag.imag_residue <= bltt::kImagResidueSoft);
  }
}

TEST_CASE("preconditioner inverse matches the dense absolute value") {
  std::mt19937_64 rng(45);
  const auto op = bltt::random_admissible_operator({4, 1, 8}, rng);
  for (double alpha : {1e-2, 1.0}) {
    const auto prec = bltt::build_abac(op, alpha);
    const Eigen::MatrixXd p = bltt::dense_alpha_circulant(op, alpha).p;
    const auto y = testing::random_vector(op.size(), rng);
    const Eigen::VectorXd ref = p.ldlt().solve(testing::view(y));
    CHECK(testing::rel_diff(bltt::apply_preconditioner_inverse(prec, y), ref) <= 1e-9);
    // Composition of the two halves equals the fused application.
    const auto two_step =
        bltt::apply_half_inverse(prec, bltt::apply_half_inverse_adjoint(prec, y));
    CHECK(testing::rel_diff(two_step, ref) <= 1e-10);
  }
}

TEST_CASE("preconditioner inverse is symmetric and positive") {
  std::mt19937_64 rng(46);
  const auto op = bltt::random_admissible_operator({9, 1, 8}, rng);
  for (double alpha : {1.0, 0.5, 1e-2}) {
    const auto prec = bltt::build_abac(op, alpha);
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = testing::random_vector(op.size(), rng);
      const auto v = testing::random_vector(op.size(), rng);
      const auto pu = bltt::apply_preconditioner_inverse(prec, u);
      const auto pv = bltt::apply_preconditioner_inverse(prec, v);
      const double lhs = testing::dot(pu, v), rhs = testing::dot(u, pv);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * testing::view(pu).norm() * testing::view(v).norm());
      CHECK(testing::dot(pu, u) > 0.0);
    }
  }
  // Positivity only at alpha = 1e-8.
  const auto prec = bltt::build_abac(op, 1e-8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = testing::random_vector(op.size(), rng);
    CHECK(testing::dot(bltt::apply_preconditioner_inverse(prec, u), u) > 0.0);
  }
}

TEST_CASE("alpha = 1 gives a block-circulant matrix") {
  std::mt19937_64 rng(47);
  const auto op = bltt::random_admissible_operator({2, 1, 4}, rng);
  const Eigen::MatrixXd c = bltt::dense_alpha_circulant(op, 1.0).p;
  const Eigen::Index m = 2, n = 4;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index col = 0; col < n; ++col) {
      const Eigen::Index k = ((r - col) % n + n) % n;
      CHECK((c.block(r * m, col * m, m, m) - c.block(k * m, 0, m, m)).norm() < 1e-12);
    }
}

TEST_CASE("inadmissible operators warn and singular spectra throw") {
  std::vector<std::string> messages;
  auto previous = bltt::set_warning_sink([&](std::string_view s) { messages.emplace_back(s); });
  const bltt::SpectralBlttOperator op({1, 1}, 2, {1.0, -1.0});
  CHECK_THROWS_AS(bltt::build_abac(op, 1.0), bltt::SingularPreconditioner);
  bltt::set_warning_sink(previous);
  CHECK_FALSE(messages.empty());
}

TEST_CASE("apply rejects length mismatches") {
  const auto prec = bltt::build_abac(bltt::SpectralBlttOperator::identity({2, 1}, 2), 0.5);
  CHECK_THROWS_AS(bltt::apply_preconditioner_inverse(prec, std::vector<double>(3)),
                  std::invalid_argument);
}
