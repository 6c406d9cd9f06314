#include "bltt/errors.hpp"
#include "bltt/oracle.hpp"
#include "bltt/problems.hpp"
#include "bltt/properties.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

TEST_CASE("size guard") {
  CHECK_NOTHROW(bltt::check_oracle_size(64, 64));
  CHECK_THROWS_AS(bltt::check_oracle_size(65, 64), bltt::SizeGuardExceeded);
  const auto big = bltt::SpectralBlttOperator::identity({64, 1}, 65);
  CHECK_THROWS_AS(bltt::assemble_dense(big), bltt::SizeGuardExceeded);
}

TEST_CASE("time reversal is an involution") {
  const Eigen::MatrixXd y = bltt::dense_time_reversal(3, 5);
  CHECK((y * y - Eigen::MatrixXd::Identity(15, 15)).norm() == 0.0);
  CHECK(y(0, 12) == 1.0);
}

TEST_CASE("alpha-circulant pattern of a scalar operator") {
  const bltt::SpectralBlttOperator op({1, 1}, 3, {4.0, -1.0, 0.5});
  const Eigen::MatrixXd c = bltt::dense_mode_circulant(op, 0, 0.1);
  Eigen::MatrixXd ref(3, 3);
  ref << 4.0, 0.1 * 0.5, 0.1 * -1.0,
        -1.0, 4.0, 0.1 * 0.5,
         0.5, -1.0, 4.0;
  CHECK((c - ref).norm() < 1e-15);
}

TEST_CASE("Q_alpha has eigenvalues plus or minus one") {
  std::mt19937_64 rng(61);
  const auto op = bltt::random_admissible_operator({3, 1, 8}, rng);
  for (double alpha : {1.0, 1e-2, 1e-8}) {
    const auto bundle = bltt::make_dense_bundle(op, alpha);
    for (double q : bltt::q_alpha_spectrum(bundle)) CHECK(std::abs(std::abs(q) - 1.0) <= 1e-10);
    CHECK(bundle.circulant.sqrt_imag_residue <= 1e-11);
    const Eigen::MatrixXd ys = bltt::dense_time_reversal(3, 8) * bundle.circulant.c_sqrt;
    CHECK((ys - ys.transpose()).norm() <= 1e-11 * ys.norm());
  }
}

TEST_CASE("square-root routes agree at moderate alpha") {
  std::mt19937_64 rng(62);
  const auto op = bltt::random_admissible_operator({2, 2, 8}, rng);
  const auto schur = bltt::dense_alpha_circulant(op, 1e-2, bltt::RootMethod::Schur);
  const auto eig = bltt::dense_alpha_circulant(op, 1e-2, bltt::RootMethod::Eigenvector);
  CHECK((schur.c_sqrt - eig.c_sqrt).norm() <= 1e-10 * schur.c_sqrt.norm());
  CHECK((schur.c_sqrt * schur.c_sqrt - schur.c).norm() <= 1e-12 * schur.c.norm());
}

TEST_CASE("Toeplitz square root by series matches the Schur route") {
  std::mt19937_64 rng(63);
  const auto op = bltt::random_admissible_operator({1, 1, 12}, rng);
  const auto series = bltt::toeplitz_sqrt_series(op.symbol(0));
  const Eigen::MatrixXd dense = bltt::toeplitz_sqrt(op.symbol(0));
  for (Eigen::Index k = 0; k < 12; ++k)
    CHECK(std::abs(series[static_cast<std::size_t>(k)] - dense(k, 0)) <=
          1e-12 * std::abs(dense(0, 0)));
}

TEST_CASE("spectrum of the preconditioned operator lies in the predicted clusters") {
  std::mt19937_64 rng(64);
  const auto op = bltt::random_admissible_operator({4, 1, 8}, rng);
  const auto first = bltt::theory_bounds(op, 1.0, 0.5);
  CHECK(first.mu >= 0.0);
  CHECK(first.nu > 0.0);
  CHECK(first.nu <= 1.0);
  CHECK(first.zeta <= first.nu);
  const double alpha = std::min(first.nu, 1e-3);
  const auto bundle = bltt::make_dense_bundle(op, alpha);
  const auto tb = bltt::theory_bounds(op, alpha, 0.5, &bundle);
  REQUIRE(tb.e_norm.has_value());
  CHECK(*tb.e_norm <= alpha * tb.mu + 1e-8);
  for (double s : bundle.preconditioned_spectrum)
    CHECK(std::abs(std::abs(s) - 1.0) <= alpha * tb.mu + 1e-12);
}

TEST_CASE("H_alpha norms respect their bound") {
  std::mt19937_64 rng(65);
  const auto op = bltt::random_admissible_operator({3, 2, 8}, rng);
  for (const auto& row : bltt::h_alpha_bounds(op, 1e-3)) CHECK(row.norm <= row.bound * (1 + 1e-12));
}

TEST_CASE("iteration bound") {
  bltt::TheoryBounds tb;
  tb.alpha = 1e-8;
  tb.mu = 1.0;
  tb.nu = 1.0;
  tb.zeta = 0.25;
  const auto ib = bltt::iteration_bound_check(tb, 1e-6);
  CHECK(ib.applicable);
  CHECK(ib.rate == doctest::Approx(1e-4));
  // 2 * 1e-4^{k-1} <= 1e-6 first holds at k = 3 (k = 2 gives 2e-4).
  CHECK(ib.iterations == 3);
  tb.alpha = 0.5;
  CHECK_FALSE(bltt::iteration_bound_check(tb, 1e-6).applicable);
}

TEST_CASE("sparse dense assembly agrees with spectral assembly for constant coefficients") {
  bltt::ProblemSpec spec;
  spec.family = bltt::Family::HeatVarCn;
  spec.m = 5;
  spec.steps = 6;
  const auto p = bltt::build_heat_var_cn(spec);
  const Eigen::MatrixXd a = bltt::assemble_dense(*p.sparse);
  const Eigen::MatrixXd b = bltt::assemble_dense(*p.spectral);
  CHECK((a - b).norm() <= 1e-12 * b.norm());
}
