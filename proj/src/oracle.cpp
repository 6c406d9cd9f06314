#include "bltt/oracle.hpp"

#include "bltt/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bltt {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& sym) {
  const Eigen::MatrixXd s = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalBreakdown("oracle: symmetric eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

// Dense block of mode-diagonal data: U diag(d) U^T.
Eigen::MatrixXd mode_block(const Eigen::MatrixXd& u, const Eigen::VectorXd& d) {
  return u * d.asDiagonal() * u.transpose();
}

} // namespace

void check_oracle_size(std::size_t modes, std::size_t steps) {
  if (modes * steps > kOracleGuard) {
    std::ostringstream msg;
    msg << "dense oracle limited to M*N <= " << kOracleGuard << " (got M=" << modes
        << ", N=" << steps << ", M*N=" << modes * steps << "); use a smaller grid";
    throw SizeGuardExceeded(msg.str());
  }
}

Eigen::MatrixXd assemble_dense(const SpectralBlttOperator& op) {
  const std::size_t m = op.modes();
  const std::size_t n = op.steps();
  check_oracle_size(m, n);
  const Eigen::MatrixXd u = dense_spatial_basis(op.grid());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(idx(m * n), idx(m * n));
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd d(idx(m));
    for (std::size_t i = 0; i < m; ++i) d[idx(i)] = op.eig(i, k);
    const Eigen::MatrixXd block = mode_block(u, d);
    for (std::size_t r = k; r < n; ++r) a.block(idx(r * m), idx((r - k) * m), idx(m), idx(m)) = block;
  }
  return a;
}

Eigen::MatrixXd assemble_dense(const SparseBlttOperator& op) {
  const std::size_t m = op.modes();
  const std::size_t n = op.steps();
  check_oracle_size(m, n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(idx(m * n), idx(m * n));
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::MatrixXd block = Eigen::MatrixXd(op.block(k));
    for (std::size_t r = k; r < n; ++r) a.block(idx(r * m), idx((r - k) * m), idx(m), idx(m)) = block;
  }
  return a;
}

Eigen::MatrixXd dense_time_reversal(std::size_t modes, std::size_t steps) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(idx(modes * steps), idx(modes * steps));
  for (std::size_t r = 0; r < steps; ++r)
    y.block(idx(r * modes), idx((steps - 1 - r) * modes), idx(modes), idx(modes)).setIdentity();
  return y;
}

Eigen::MatrixXd dense_mode_circulant(const SpectralBlttOperator& op, std::size_t mode,
                                     double alpha) {
  const std::size_t n = op.steps();
  Eigen::MatrixXd c(idx(n), idx(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col)
      c(idx(r), idx(col)) = r >= col ? op.eig(mode, r - col) : alpha * op.eig(mode, n - (col - r));
  return c;
}

Eigen::MatrixXd dense_alpha_circulant_matrix(const SpectralBlttOperator& op, double alpha) {
  const std::size_t m = op.modes();
  const std::size_t n = op.steps();
  check_oracle_size(m, n);
  const Eigen::MatrixXd u = dense_spatial_basis(op.grid());
  std::vector<Eigen::MatrixXd> blocks(n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd d(idx(m));
    for (std::size_t i = 0; i < m; ++i) d[idx(i)] = op.eig(i, k);
    blocks[k] = mode_block(u, d);
  }
  Eigen::MatrixXd c(idx(m * n), idx(m * n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      auto target = c.block(idx(r * m), idx(col * m), idx(m), idx(m));
      if (r >= col) target = blocks[r - col];
      else target = alpha * blocks[n - (col - r)];
    }
  return c;
}

DenseAlphaCirculant dense_alpha_circulant(const SpectralBlttOperator& op, double alpha,
                                          RootMethod method) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("dense_alpha_circulant: alpha must lie in (0, 1]");
  }
  const std::size_t m = op.modes();
  const std::size_t n = op.steps();
  check_oracle_size(m, n);
  DenseAlphaCirculant out;
  out.c = dense_alpha_circulant_matrix(op, alpha);

  std::vector<Eigen::MatrixXcd> roots(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::MatrixXcd ci = dense_mode_circulant(op, i, alpha).cast<std::complex<double>>();
    const bool vectors = method == RootMethod::Eigenvector;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ci, vectors);
    if (es.info() != Eigen::Success) throw NumericalBreakdown("oracle: complex eigensolver failed");
    Eigen::VectorXcd s = es.eigenvalues();
    for (Index k = 0; k < s.size(); ++k) {
      const auto z = s[k];
      if (std::abs(z) == 0.0 || (z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * std::abs(z))) {
        std::ostringstream msg;
        msg << "oracle: alpha-circulant eigenvalue " << z << " of mode " << i
            << " lies on the branch cut";
        throw SingularPreconditioner(msg.str());
      }
      s[k] = std::sqrt(z);
    }
    if (vectors) {
      const Eigen::MatrixXcd& v = es.eigenvectors();
      roots[i] = v * s.asDiagonal() * v.partialPivLu().inverse();
    } else {
      roots[i] = ci.sqrt();
    }
  }

  const Eigen::MatrixXd u = dense_spatial_basis(op.grid());
  Eigen::MatrixXcd root(idx(m * n), idx(m * n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      Eigen::VectorXcd d(idx(m));
      for (std::size_t i = 0; i < m; ++i) d[idx(i)] = roots[i](idx(r), idx(col));
      root.block(idx(r * m), idx(col * m), idx(m), idx(m)) =
          u.cast<std::complex<double>>() * d.asDiagonal() * u.transpose().cast<std::complex<double>>();
    }
  const double re = root.real().cwiseAbs().maxCoeff();
  const double im = root.imag().cwiseAbs().maxCoeff();
  out.sqrt_imag_residue = re > 0.0 ? im / re : im;
  out.c_sqrt = root.real();
  out.p = out.c_sqrt.transpose() * out.c_sqrt;
  out.p = 0.5 * (out.p + out.p.transpose());
  return out;
}

DenseBundle make_dense_bundle(const SpectralBlttOperator& op, double alpha,
                              RootMethod method) {
  DenseBundle b;
  b.alpha = alpha;
  b.modes = op.modes();
  b.steps = op.steps();
  b.a = assemble_dense(op);
  b.ya = dense_time_reversal(op.modes(), op.steps()) * b.a;
  b.circulant = dense_alpha_circulant(op, alpha, method);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.circulant.p);
  if (es.info() != Eigen::Success) throw NumericalBreakdown("oracle: eigensolver failed on P");
  const Eigen::VectorXd w = es.eigenvalues();
  if (w.minCoeff() <= 0.0) throw NotSpd("oracle: dense |C_alpha| is not positive definite");
  b.p_inv_half = es.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  b.preconditioned_spectrum = preconditioned_spectrum(b);
  return b;
}

std::vector<double> preconditioned_spectrum(const DenseBundle& bundle) {
  return sorted_eigenvalues(bundle.p_inv_half * bundle.ya * bundle.p_inv_half);
}

std::vector<double> q_alpha_spectrum(const DenseBundle& bundle) {
  const Eigen::MatrixXd yc = dense_time_reversal(bundle.modes, bundle.steps) * bundle.circulant.c;
  return sorted_eigenvalues(bundle.p_inv_half * yc * bundle.p_inv_half);
}

double e_alpha_norm(const DenseBundle& bundle) {
  const Eigen::MatrixXd yr =
      dense_time_reversal(bundle.modes, bundle.steps) * (bundle.circulant.c - bundle.a);
  const auto ev = sorted_eigenvalues(bundle.p_inv_half * yr * bundle.p_inv_half);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

Eigen::MatrixXd toeplitz_sqrt(std::span<const double> symbol) {
  const std::size_t n = symbol.size();
  detail::require(n > 0, "toeplitz_sqrt: empty symbol");
  detail::require(symbol[0] > 0.0, "toeplitz_sqrt: leading coefficient must be positive");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(idx(n), idx(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c <= r; ++c) t(idx(r), idx(c)) = symbol[r - c];
  return t.sqrt();
}

std::vector<double> toeplitz_sqrt_series(std::span<const double> symbol) {
  const std::size_t n = symbol.size();
  detail::require(n > 0, "toeplitz_sqrt_series: empty symbol");
  detail::require(symbol[0] > 0.0, "toeplitz_sqrt_series: leading coefficient must be positive");
  std::vector<double> s(n);
  s[0] = std::sqrt(symbol[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = symbol[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2.0 * s[0]);
  }
  return s;
}

TheoryBounds theory_bounds(const SpectralBlttOperator& op, double alpha, double delta,
                           const DenseBundle* bundle) {
  check_oracle_size(op.modes(), op.steps());
  const auto adm = check_admissible(op);
  if (!adm.admissible) {
    throw std::invalid_argument("theory_bounds: operator is not admissible (c0 <= 0)");
  }
  TheoryBounds b;
  b.alpha = alpha;
  b.delta = delta;
  b.c0 = adm.c0;
  b.s_min_sq = std::numeric_limits<double>::infinity();
  double lam0_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < op.modes(); ++i) {
    b.a0_norm = std::max(b.a0_norm, std::abs(op.eig(i, 0)));
    lam0_max = std::max(lam0_max, op.eig(i, 0));
    const Eigen::MatrixXd s = toeplitz_sqrt(op.symbol(i));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
    const auto& sv = svd.singularValues();
    b.s_norm = std::max(b.s_norm, sv[0]);
    const double smin = sv[sv.size() - 1];
    b.s_min_sq = std::min(b.s_min_sq, smin * smin);
  }
  const double excess = b.a0_norm - b.c0;
  b.mu = 2.0 * excess / b.s_min_sq;
  b.mu_modes = 2.0 * (lam0_max - b.c0) / b.s_min_sq;
  const double denom = 4.0 * std::sqrt(b.c0) * excess * b.s_norm + excess * excess;
  b.nu = denom > 0.0 ? std::min(1.0, 2.0 * b.c0 * b.s_min_sq / denom) : 1.0;
  b.zeta = b.mu > 0.0 ? std::min(delta * delta / b.mu, b.nu) : b.nu;
  if (bundle) b.e_norm = e_alpha_norm(*bundle);
  return b;
}

std::vector<HBoundRow> h_alpha_bounds(const SpectralBlttOperator& op, double alpha) {
  check_oracle_size(op.modes(), op.steps());
  const auto adm = check_admissible(op);
  const std::size_t n = op.steps();
  std::vector<HBoundRow> rows;
  for (std::size_t i = 0; i < op.modes(); ++i) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(idx(n), idx(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) h(idx(r), idx(c)) = alpha * op.eig(i, n - (c - r));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
    rows.push_back({i, svd.singularValues()[0], alpha * (op.eig(i, 0) - adm.c0)});
  }
  return rows;
}

IterationBound iteration_bound_check(const TheoryBounds& bounds, double tol) {
  detail::require(tol > 0.0 && tol < 1.0, "iteration_bound_check: tol must lie in (0, 1)");
  IterationBound out;
  out.rate = std::sqrt(bounds.alpha * bounds.mu);
  if (bounds.alpha > bounds.zeta) {
    std::ostringstream msg;
    msg << "alpha = " << bounds.alpha << " exceeds zeta = " << bounds.zeta
        << "; the bound does not apply";
    out.note = msg.str();
    return out;
  }
  if (out.rate >= 1.0) {
    out.note = "rate sqrt(alpha*mu) >= 1; the bound gives no decay";
    return out;
  }
  out.applicable = true;
  if (out.rate == 0.0) {
    out.iterations = 1;
    return out;
  }
  // 2 rate^{k-1} <= tol  <=>  k - 1 >= log(tol/2) / log(rate)
  const double need = std::log(tol / 2.0) / std::log(out.rate);
  out.iterations = 1 + static_cast<std::size_t>(std::ceil(need - 1e-12));
  return out;
}

} // namespace bltt
