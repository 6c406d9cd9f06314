#include "bltt/minres.hpp"

#include "bltt/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bltt {

std::string_view to_string(ResidualConvention c) {
  switch (c) {
  case ResidualConvention::PreconditionedRelative: return "preconditioned-relative";
  case ResidualConvention::PreconditionedAbsolute: return "preconditioned-absolute";
  case ResidualConvention::TrueRelative: return "true-relative";
  }
  return "?";
}

ResidualConvention parse_residual_convention(std::string_view name) {
  for (auto c : {ResidualConvention::PreconditionedRelative,
                 ResidualConvention::PreconditionedAbsolute, ResidualConvention::TrueRelative}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown residual convention '" + std::string(name) + "'");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void probe_symmetry(const LinearMap& matvec, std::size_t n, const MinresConfig& cfg) {
  std::mt19937_64 rng(cfg.probe_seed);
  std::normal_distribution<double> dist;
  std::vector<double> u(n), v(n), au(n), av(n);
  for (auto& x : u) x = dist(rng);
  for (auto& x : v) x = dist(rng);
  matvec(u, au);
  matvec(v, av);
  const double lhs = dot(au, v);
  const double rhs = dot(u, av);
  const double scale = norm2(au) * norm2(v) + norm2(u) * norm2(av);
  if (scale > 0.0 && std::abs(lhs - rhs) > cfg.symmetry_tol * scale) {
    std::ostringstream msg;
    msg << "MINRES: operator failed the symmetry probe (<Au,v> = " << lhs
        << ", <u,Av> = " << rhs << ")";
    throw ContractViolation(msg.str());
  }
}

} // namespace

MinresResult minres_solve(const LinearMap& matvec, const LinearMap& prec_inv,
                          std::span<const double> rhs, const MinresConfig& cfg,
                          std::optional<std::span<const double>> x0) {
  detail::require(cfg.tol > 0.0, "MINRES: tol must be positive");
  detail::require(cfg.max_iter >= 1, "MINRES: max_iter must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = rhs.size();

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (prec_inv) prec_inv(in, out);
    else std::copy(in.begin(), in.end(), out.begin());
  };

  if (cfg.symmetry_probe && n > 0) probe_symmetry(matvec, n, cfg);

  MinresResult result;
  auto& rep = result.report;
  std::vector<double>& x = result.x;
  x.assign(n, 0.0);

  // r1, r2 hold consecutive unnormalized Lanczos vectors; r / zr track the
  // residual b - A x and P^{-1}(b - A x) through the Givens recurrences.
  std::vector<double> r1(rhs.begin(), rhs.end());
  if (x0) {
    detail::require(x0->size() == n, "MINRES: initial guess has the wrong length");
    std::copy(x0->begin(), x0->end(), x.begin());
    std::vector<double> ax(n);
    matvec(x, ax);
    for (std::size_t i = 0; i < n; ++i) r1[i] -= ax[i];
  }
  std::vector<double> y(n);
  precondition(r1, y);

  std::vector<double> zb(n);
  precondition(rhs, zb);
  const double b_norm = norm2(rhs);
  const double zb_norm = norm2(zb);
  const double b_pnorm = std::sqrt(std::max(dot(rhs, zb), 0.0));

  const double beta1_sq = dot(r1, y);
  if (beta1_sq < 0.0 || (beta1_sq == 0.0 && norm2(r1) > 0.0)) {
    throw NotSpd("MINRES: preconditioner gave <r0, P^{-1} r0> <= 0");
  }
  double beta1 = std::sqrt(beta1_sq);

  std::vector<double> r(r1);
  std::vector<double> zr(y);

  auto monitored = [&]() {
    switch (cfg.convention) {
    case ResidualConvention::PreconditionedRelative:
      return zb_norm > 0.0 ? norm2(zr) / zb_norm : norm2(zr);
    case ResidualConvention::PreconditionedAbsolute: return norm2(zr);
    case ResidualConvention::TrueRelative: return b_norm > 0.0 ? norm2(r) / b_norm : norm2(r);
    }
    return 0.0;
  };

  auto finish = [&]() {
    std::vector<double> ax(n);
    matvec(x, ax);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (rhs[i] - ax[i]) * (rhs[i] - ax[i]);
    rep.final_true_residual = b_norm > 0.0 ? std::sqrt(s) / b_norm : std::sqrt(s);
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  rep.final_monitored = monitored();
  if (beta1 == 0.0 || rep.final_monitored <= cfg.tol) {
    rep.converged = true;
    finish();
    return result;
  }

  std::vector<double> r2(r1);
  std::vector<double> v(n), av(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  double beta = beta1;
  double oldb = 0.0;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  constexpr double tiny = std::numeric_limits<double>::epsilon();

  for (std::size_t itn = 1; itn <= cfg.max_iter; ++itn) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    matvec(v, av);
    std::copy(av.begin(), av.end(), y.begin());
    if (itn >= 2) {
      const double c = beta / oldb;
      for (std::size_t i = 0; i < n; ++i) y[i] -= c * r1[i];
    }
    const double alfa = dot(v, y);
    {
      const double c = alfa / beta;
      for (std::size_t i = 0; i < n; ++i) y[i] -= c * r2[i];
    }
    std::swap(r1, r2);
    std::copy(y.begin(), y.end(), r2.begin());
    precondition(r2, y);
    oldb = beta;
    const double beta_sq = dot(r2, y);
    if (beta_sq < 0.0) throw NotSpd("MINRES: preconditioner gave a negative inner product");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    const double phibar_old = phibar;
    phibar = sn * phibar;

    std::swap(w1, w2);
    std::swap(w2, w);
    const double denom = 1.0 / gamma;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
      x[i] += phi * w[i];
    }

    // r_k = s_k^2 r_{k-1} - c_k (phibar_{k-1} / gamma_k) r2, where r2 is the
    // unnormalized next Lanczos vector; the same holds for P^{-1} r_k with y.
    const double s2 = sn * sn;
    const double coef = cs * phibar_old / gamma;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = s2 * r[i] - coef * r2[i];
      zr[i] = s2 * zr[i] - coef * y[i];
    }

    rep.iterations = itn;
    rep.final_monitored = monitored();
    if (cfg.record_history) {
      rep.residual_history.push_back(rep.final_monitored);
      rep.natural_history.push_back(b_pnorm > 0.0 ? std::abs(phibar) / b_pnorm
                                                  : std::abs(phibar));
    }
    if (rep.final_monitored <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (beta == 0.0) {
      rep.krylov_exhausted = true;
      rep.converged = true;
      break;
    }
  }
  finish();
  return result;
}

} // namespace bltt
