#include "bltt/properties.hpp"

#include "bltt/abac.hpp"
#include "bltt/errors.hpp"
#include "bltt/minres.hpp"
#include "bltt/operator.hpp"
#include "bltt/oracle.hpp"
#include "bltt/problems.hpp"
#include "bltt/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace bltt {

namespace {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;

Index idx(std::size_t v) { return static_cast<Index>(v); }

class Collector {
public:
  // Registers a property so it is reported even when no case reaches it.
  void declare(const std::string& name, double threshold) {
    if (index_.count(name)) return;
    index_[name] = results_.size();
    PropertyResult r;
    r.name = name;
    r.threshold = threshold;
    results_.push_back(r);
  }

  void record(const std::string& name, double value, const std::string& where) {
    auto& r = results_.at(index_.at(name));
    ++r.cases;
    const bool bad = !std::isfinite(value) || value > r.threshold;
    if (bad || (r.passed && (value > r.value || r.cases == 1))) {
      if (r.passed || bad) r.detail = where;
      r.value = std::isfinite(value) ? std::max(r.value, value) : value;
    }
    if (bad) r.passed = false;
  }

  void fail(const std::string& name, const std::string& why) {
    auto& r = results_.at(index_.at(name));
    ++r.cases;
    r.passed = false;
    r.detail = why;
  }

  // Runs `body`, turning an escaped exception into a failure of `name`.
  void guard(const std::string& name, const std::string& where, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(name, where + ": " + e.what());
    }
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

private:
  std::vector<PropertyResult> results_;
  std::map<std::string, std::size_t> index_;
};

std::vector<double> normal_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<Complex> complex_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

template <typename T>
double rel_diff(const std::vector<T>& a, const std::vector<T>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double rel_diff(const std::vector<double>& a, const Vec& b) {
  return rel_diff(a, std::vector<double>(b.data(), b.data() + b.size()));
}

Vec as_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), idx(v.size())); }

std::string describe(const SpectralBlttOperator& op, double alpha = -1.0) {
  std::ostringstream s;
  s << "M=" << op.modes() << " N=" << op.steps();
  if (alpha >= 0.0) s << " alpha=" << alpha;
  if (!op.note().empty()) s << " [" << op.note() << "]";
  return s.str();
}

double max_cluster_distance(const std::vector<double>& ev) {
  double d = 0.0;
  for (double x : ev) d = std::max(d, std::abs(std::abs(x) - 1.0));
  return d;
}

// ---------------------------------------------------------------------------
// Transform layer

void transform_properties(Collector& c, std::mt19937_64& rng) {
  for (std::size_t n : {1u, 2u, 5u, 8u, 16u, 31u}) {
    const std::string where = "N=" + std::to_string(n);
    c.guard("dft-unitarity", where, [&] {
      DftPlan plan(n);
      const auto v = complex_vector(n, rng);
      const auto f = plan.forward(v);
      double nv = 0.0, nf = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nv += std::norm(v[i]);
        nf += std::norm(f[i]);
      }
      const double norm_gap = std::abs(std::sqrt(nf) - std::sqrt(nv)) / std::sqrt(nv);
      c.record("dft-unitarity", std::max(norm_gap, rel_diff(plan.inverse(f), v)), where);
    });
    c.guard("dft-matches-summation", where, [&] {
      DftPlan plan(n);
      const auto v = complex_vector(n, rng);
      std::vector<Complex> ref(n);
      const double pi = std::acos(-1.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
          ref[k] += std::polar(1.0 / std::sqrt(double(n)), -2.0 * pi * double(j * k % n) / double(n)) * v[j];
      c.record("dft-matches-summation", rel_diff(plan.forward(v), ref), where);
    });
  }

  for (std::size_t m : {1u, 3u, 4u, 7u}) {
    for (int dims : {1, 2}) {
      const std::string where = "m=" + std::to_string(m) + " d=" + std::to_string(dims);
      c.guard("dst-orthogonality", where, [&] {
        Dst1Plan plan(m, dims, 3);
        const auto v = normal_vector(plan.size() * 3, rng);
        c.record("dst-orthogonality", rel_diff(plan.apply(plan.apply(v)), v), where);
      });
      c.guard("dst-backends-agree", where, [&] {
        Dst1Plan native(m, dims, 2, Dst1Backend::Native);
        Dst1Plan odd(m, dims, 2, Dst1Backend::OddExtension);
        const auto v = normal_vector(native.size() * 2, rng);
        c.record("dst-backends-agree", rel_diff(odd.apply(v), native.apply(v)), where);
      });
    }
    const std::string where = "m=" + std::to_string(m);
    c.guard("dst-matches-sine-matrix", where, [&] {
      Dst1Plan plan(m, 1);
      const auto s = dense_sine_matrix(m);
      const auto v = normal_vector(m, rng);
      std::vector<double> ref(m, 0.0);
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) ref[p] += s[p * m + q] * v[q];
      c.record("dst-matches-sine-matrix", rel_diff(plan.apply(v), ref), where);
    });
  }

  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 3}, {5, 4}, {1, 7}, {6, 1}}) {
    const std::string where = "M=" + std::to_string(m) + " N=" + std::to_string(n);
    c.guard("kron-reorder", where, [&] {
      const auto v = normal_vector(m * n, rng);
      const auto w = kron_reorder<double>(v, m, n, Reorder::ToModeMajor);
      double err = rel_diff(kron_reorder<double>(w, m, n, Reorder::ToTimeMajor), v);
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < m; ++i) err = std::max(err, std::abs(w[i * n + t] - v[t * m + i]));
      c.record("kron-reorder", err, where);
    });
  }

  for (double alpha : {1.0, 1e-2, 1e-8}) {
    const std::string where = "alpha=" + std::to_string(alpha);
    c.guard("alpha-scaling-inverse", where, [&] {
      AlphaScaling d(alpha, 16);
      const auto v = complex_vector(48, rng);
      auto w = v;
      d.apply(w);
      d.apply_inverse(w);
      double err = rel_diff(w, v);
      const auto e = d.entries();
      for (std::size_t j = 0; j < e.size(); ++j)
        err = std::max(err, std::abs(e[j] - std::pow(alpha, double(j) / 16.0)) / std::pow(alpha, double(j) / 16.0));
      c.record("alpha-scaling-inverse", err, where);
    });
  }
}

// ---------------------------------------------------------------------------
// Operator, preconditioner and oracle layers on one operator

void operator_properties(Collector& c, const SpectralBlttOperator& op, std::mt19937_64& rng) {
  const std::string where = describe(op);
  const std::size_t n = op.size();
  c.guard("structured-matvec-vs-dense", where, [&] {
    const Eigen::MatrixXd a = assemble_dense(op);
    for (int rep = 0; rep < 2; ++rep) {
      const auto v = normal_vector(n, rng);
      c.record("structured-matvec-vs-dense", rel_diff(bltt_matvec(op, v), Vec(a * as_vec(v))), where);
    }
  });
  c.guard("symmetrized-symmetry", where, [&] {
    Eigen::MatrixXd s(idx(n), idx(n));
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      s.col(idx(j)) = as_vec(symmetrized_matvec(op, e));
      e[j] = 0.0;
    }
    c.record("symmetrized-symmetry", (s - s.transpose()).norm() / s.norm(), where);
  });
}

void alpha_properties(Collector& c, const SpectralBlttOperator& op, double alpha, double mu,
                      double nu, std::mt19937_64& rng) {
  const std::string where = describe(op, alpha);
  const std::size_t n = op.size();
  // Comparisons against single half-steps or dense eigenvalues of the
  // alpha-circulant blocks inherit cond(D_alpha) ~ alpha^{-(N-1)/N}.
  const bool moderate = alpha >= 1e-4;

  c.guard("conjugate-symmetry", where, [&] {
    c.record("conjugate-symmetry", conjugate_symmetry_residue(build_alpha_spectrum(op, alpha)), where);
  });
  if (moderate) c.guard("alpha-spectrum-vs-dense", where, [&] {
    const auto spec = build_alpha_spectrum(op, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < op.modes(); ++i) {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
          dense_mode_circulant(op, i, alpha).cast<Complex>(), false);
      const Eigen::VectorXcd ev = es.eigenvalues();
      double scale = 0.0;
      for (Index k = 0; k < ev.size(); ++k) scale = std::max(scale, std::abs(ev[k]));
      std::vector<bool> used(op.steps(), false);
      for (std::size_t k = 0; k < op.steps(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (Index j = 0; j < ev.size(); ++j) {
          const double d = std::abs(spec.eig(i, k) - ev[j]);
          if (!used[std::size_t(j)] && d < best) best = d, pick = std::size_t(j);
        }
        used[pick] = true;
        worst = std::max(worst, best / scale);
      }
    }
    c.record("alpha-spectrum-vs-dense", worst, where);
  });

  c.guard("q-alpha-orthogonal", where, [&] {
    const DenseBundle b = make_dense_bundle(op, alpha);
    c.record("q-alpha-orthogonal", max_cluster_distance(q_alpha_spectrum(b)), where);
    c.record("sqrt-realness", b.circulant.sqrt_imag_residue, where);
    const Eigen::MatrixXd ys = dense_time_reversal(op.modes(), op.steps()) * b.circulant.c_sqrt;
    c.record("y-sqrt-symmetry", (ys - ys.transpose()).norm() / ys.norm(), where);
    c.record("sqrt-squares-to-c",
             (b.circulant.c_sqrt * b.circulant.c_sqrt - b.circulant.c).norm() / b.circulant.c.norm(),
             where);
    const double asym = (b.circulant.p - b.circulant.p.transpose()).norm() / b.circulant.p.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(b.circulant.p, Eigen::EigenvaluesOnly);
    c.record("preconditioner-spd", pe.eigenvalues().minCoeff() > 0.0 ? asym : 1.0, where);

    const double bound = alpha * mu;
    const double dist = max_cluster_distance(b.preconditioned_spectrum);
    if (alpha <= nu) c.record("spectrum-inclusion", dist - bound, where);
    c.record("e-alpha-bound", e_alpha_norm(b) - bound, where);

    const AbacPreconditioner prec = build_abac(op, alpha);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(b.circulant.c_sqrt.transpose());
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b.circulant.c_sqrt);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(b.circulant.p);
    for (int rep = 0; rep < 2; ++rep) {
      const auto y = normal_vector(n, rng);
      const Vec yv = as_vec(y);
      if (moderate) {
        c.record("half-inverse-adjoint-vs-dense",
                 rel_diff(apply_half_inverse_adjoint(prec, y), Vec(lu_t.solve(yv))), where);
        c.record("half-inverse-vs-dense",
                 rel_diff(apply_half_inverse(prec, y), Vec(lu.solve(yv))), where);
      }
      const auto pinv = apply_preconditioner_inverse(prec, y);
      c.record("preconditioner-vs-dense", rel_diff(pinv, Vec(ldlt.solve(yv))), where);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += y[i] * pinv[i];
      c.record("preconditioner-positive", dot > 0.0 ? 0.0 : 1.0, where);
    }
  });
}

// Principal roots from the Schur and eigenvector routes agree at moderate alpha.
void root_route_property(Collector& c, const SpectralBlttOperator& op, double alpha) {
  const std::string where = describe(op, alpha);
  c.guard("root-routes-agree", where, [&] {
    const auto schur = dense_alpha_circulant(op, alpha, RootMethod::Schur);
    const auto eig = dense_alpha_circulant(op, alpha, RootMethod::Eigenvector);
    c.record("root-routes-agree", (schur.c_sqrt - eig.c_sqrt).norm() / schur.c_sqrt.norm(), where);
  });
}

void clustering_slope(Collector& c, const SpectralBlttOperator& op) {
  const std::string where = describe(op);
  c.guard("clustering-slope", where, [&] {
    std::vector<double> d;
    for (double alpha : {1e-1, 1e-2, 1e-3})
      d.push_back(max_cluster_distance(make_dense_bundle(op, alpha).preconditioned_spectrum));
    // Each tenfold reduction of alpha must shrink the distance by 10 within a factor 3.
    double worst = 0.0;
    for (std::size_t j = 1; j < d.size(); ++j) {
      const double ratio = d[j - 1] / d[j];
      worst = std::max(worst, std::max(ratio / 10.0, 10.0 / ratio));
    }
    c.record("clustering-slope", worst, where);
  });
}

void bound_properties(Collector& c, const SpectralBlttOperator& op, double alpha) {
  const std::string where = describe(op, alpha);
  c.guard("h-alpha-bound", where, [&] {
    for (const auto& row : h_alpha_bounds(op, alpha))
      c.record("h-alpha-bound", row.norm - row.bound * (1.0 + 1e-12), where);
  });
  c.guard("sqrt-series-vs-schur", where, [&] {
    for (std::size_t i = 0; i < op.modes(); ++i) {
      const Eigen::MatrixXd s = toeplitz_sqrt(op.symbol(i));
      const auto series = toeplitz_sqrt_series(op.symbol(i));
      std::vector<double> col(s.rows());
      for (Index r = 0; r < s.rows(); ++r) col[std::size_t(r)] = s(r, 0);
      c.record("sqrt-series-vs-schur", rel_diff(series, col), where);
    }
  });
  c.guard("theory-constants", where, [&] {
    const auto tb = theory_bounds(op, alpha, 0.5);
    const bool ok = tb.mu >= 0.0 && tb.nu > 0.0 && tb.nu <= 1.0 && tb.zeta > 0.0 &&
                    tb.zeta <= tb.nu && tb.mu_modes <= tb.mu * (1.0 + 1e-12);
    c.record("theory-constants", ok ? 0.0 : 1.0, where);
  });
}

// ---------------------------------------------------------------------------
// MINRES

std::size_t first_below(const std::vector<double>& history, double tol) {
  for (std::size_t k = 0; k < history.size(); ++k)
    if (history[k] <= tol) return k + 1;
  return std::numeric_limits<std::size_t>::max();
}

void minres_properties(Collector& c, const SpectralBlttOperator& op, double alpha,
                       std::mt19937_64& rng) {
  const std::string where = describe(op, alpha);
  const std::size_t n = op.size();
  c.guard("minres-iterates-vs-dense", where, [&] {
    const auto fast = std::make_shared<FastBlttOperator>(op);
    const auto prec = std::make_shared<AbacPreconditioner>(build_abac(op, alpha));
    const DenseBundle b = make_dense_bundle(op, alpha);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(b.circulant.p);
    const auto rhs = normal_vector(n, rng);

    MinresConfig cfg;
    cfg.tol = 1e-300;
    cfg.max_iter = std::min<std::size_t>(n, 6);
    LinearMap fast_a = [fast](std::span<const double> v, std::span<double> o) { fast->apply_symmetrized(v, o); };
    LinearMap fast_p = [prec](std::span<const double> v, std::span<double> o) { prec->apply_inverse(v, o); };
    LinearMap dense_a = [&b](std::span<const double> v, std::span<double> o) {
      Eigen::Map<Vec>(o.data(), idx(o.size())) = b.ya * Eigen::Map<const Vec>(v.data(), idx(v.size()));
    };
    LinearMap dense_p = [&ldlt](std::span<const double> v, std::span<double> o) {
      Eigen::Map<Vec>(o.data(), idx(o.size())) = ldlt.solve(Eigen::Map<const Vec>(v.data(), idx(v.size())));
    };
    const auto rs = minres_solve(fast_a, fast_p, rhs, cfg);
    const auto rd = minres_solve(dense_a, dense_p, rhs, cfg);
    const bool same_steps = rs.report.iterations == rd.report.iterations;
    c.record("minres-iterates-vs-dense", same_steps ? rel_diff(rs.x, rd.x) : 1.0, where);

    // Tight solve against the dense direct solution.
    MinresConfig tight;
    tight.tol = 1e-12;
    tight.max_iter = 4 * n;
    const auto full = minres_solve(fast_a, fast_p, rhs, tight);
    const Vec exact = b.ya.partialPivLu().solve(as_vec(rhs));
    c.record("minres-solution-vs-direct", rel_diff(full.x, exact), where);
    double prev = std::numeric_limits<double>::infinity(), rise = 0.0;
    for (double h : full.report.natural_history) {
      rise = std::max(rise, h - prev * (1.0 + 1e-10));
      prev = h;
    }
    c.record("minres-natural-monotone", std::max(rise, 0.0), where);
  });
}

// Iteration counts against the clustering-based and the theorem-based bounds.
void convergence_bounds(Collector& c, std::mt19937_64& rng) {
  ProblemSpec s;
  s.family = Family::HeatBdf;
  s.m = 3;
  s.steps = 8;
  s.coefficient.value = 1.0;
  const Problem p = build_problem(s);
  const SpectralBlttOperator& op = *p.spectral;
  const double tol = 1e-6;
  const auto tb0 = theory_bounds(op, 1.0, 0.5);
  for (double alpha : {1e-4, tb0.zeta, tb0.zeta * 1e-2}) {
    const std::string where = describe(op, alpha);
    c.guard("cluster-termination", where, [&] {
      const DenseBundle b = make_dense_bundle(op, alpha);
      const auto prec = std::make_shared<AbacPreconditioner>(build_abac(op, alpha));
      LinearMap pa = [prec](std::span<const double> v, std::span<double> o) { prec->apply_inverse(v, o); };
      MinresConfig cfg;
      cfg.tol = 1e-300;
      cfg.max_iter = op.size();
      const auto rhs = normal_vector(op.size(), rng);
      const auto run = minres_solve(p.symmetrized_matvec(), pa, rhs, cfg);
      const std::size_t observed = first_below(run.report.natural_history, tol);

      const double e = max_cluster_distance(b.preconditioned_spectrum);
      if (e < 1.0) {
        const double delta = std::sqrt(e * (2.0 + e) / ((1.0 - e) * (2.0 - e)));
        const double cap = delta > 0.0
                               ? 2.0 * std::ceil(std::log(2.0 / tol) / std::log(1.0 / delta))
                               : 2.0;
        c.record("cluster-termination", double(observed) / cap, where);
      }
      const auto tb = theory_bounds(op, alpha, 0.5);
      const auto ib = iteration_bound_check(tb, tol);
      if (ib.applicable) c.record("iteration-bound", double(observed) / double(ib.iterations), where);
    });
  }
}

// Two exact clusters {-1, +1} end the iteration after at most two steps.
void exact_clusters(Collector& c, std::mt19937_64& rng) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 4}, {3, 7}}) {
    const auto op = SpectralBlttOperator::identity(SpatialGrid{m, 1}, n);
    const std::string where = describe(op, 1.0);
    c.guard("minres-exact-clusters", where, [&] {
      const auto prec = std::make_shared<AbacPreconditioner>(build_abac(op, 1.0));
      LinearMap pa = [prec](std::span<const double> v, std::span<double> o) { prec->apply_inverse(v, o); };
      LinearMap ya = [&op](std::span<const double> v, std::span<double> o) {
        const auto r = symmetrized_matvec(op, v);
        std::copy(r.begin(), r.end(), o.begin());
      };
      MinresConfig cfg;
      cfg.tol = 1e-12;
      cfg.convention = ResidualConvention::TrueRelative;
      const auto run = minres_solve(ya, pa, normal_vector(op.size(), rng), cfg);
      c.record("minres-exact-clusters", run.report.converged ? double(run.report.iterations) : 1e9,
               where);
    });
  }
}

void family_properties(Collector& c, std::mt19937_64& rng) {
  std::vector<ProblemSpec> specs;
  for (Family f : {Family::HeatBdf, Family::HeatCn, Family::HeatVarCn, Family::FracL1}) {
    ProblemSpec s;
    s.family = f;
    s.m = 3;
    s.steps = 6;
    specs.push_back(s);
  }
  specs[2].coefficient = {Coefficient::Kind::Product20, 1.0};
  specs.push_back(specs[3]);
  specs.back().coefficient = {Coefficient::Kind::Power35, 1.0};
  specs.back().hi = 1.0;

  for (const auto& s : specs) {
    const std::string where = std::string(to_string(s.family)) + " " +
                              std::string(to_string(s.coefficient.kind));
    c.guard("problem-matvec-vs-dense", where, [&] {
      const Problem p = build_problem(s);
      const Eigen::MatrixXd a = p.sparse ? assemble_dense(*p.sparse) : assemble_dense(*p.spectral);
      const auto v = normal_vector(p.size(), rng);
      std::vector<double> out(p.size());
      p.matvec()(v, out);
      c.record("problem-matvec-vs-dense", rel_diff(out, Vec(a * as_vec(v))), where);
      if (p.sparse) {
        // With a constant coefficient the sparse assembly must reproduce the spectral form.
        ProblemSpec flat = s;
        flat.coefficient = {Coefficient::Kind::Constant, p.mean_coefficient};
        const Problem q = build_problem(flat);
        if (q.sparse) {
          std::vector<double> sv(q.size());
          q.sparse->apply(v, sv);
          c.record("sparse-vs-spectral", rel_diff(sv, bltt_matvec(*q.spectral, v)), where);
        }
      }
    });
  }
}

} // namespace

SpectralBlttOperator random_admissible_operator(const SuiteSize& size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> margin(0.5, 2.0);
  const SpatialGrid grid{size.m, size.dims};
  const std::size_t n = size.steps;
  std::vector<double> table(grid.size() * n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      table[i * n + k] = entry(rng);
      sum += std::abs(table[i * n + k]);
    }
    table[i * n] = sum + margin(rng);
  }
  return SpectralBlttOperator(grid, n, std::move(table), "random admissible");
}

std::vector<PropertyResult> run_property_suite(const PropertySuiteOptions& options) {
  std::mt19937_64 rng(options.seed);
  Collector c;
  c.declare("dft-unitarity", 1e-12);
  c.declare("dft-matches-summation", 1e-12);
  c.declare("dst-orthogonality", 1e-12);
  c.declare("dst-backends-agree", 1e-12);
  c.declare("dst-matches-sine-matrix", 1e-12);
  c.declare("kron-reorder", 0.0);
  c.declare("alpha-scaling-inverse", 1e-12);
  c.declare("structured-matvec-vs-dense", 1e-9);
  c.declare("symmetrized-symmetry", 1e-13);
  c.declare("problem-matvec-vs-dense", 1e-12);
  c.declare("sparse-vs-spectral", 1e-12);
  c.declare("alpha-spectrum-vs-dense", 1e-10);
  c.declare("conjugate-symmetry", 1e-12);
  c.declare("q-alpha-orthogonal", 1e-10);
  c.declare("sqrt-realness", 1e-11);
  c.declare("y-sqrt-symmetry", 1e-11);
  c.declare("sqrt-squares-to-c", 1e-10);
  c.declare("root-routes-agree", 1e-9);
  c.declare("preconditioner-spd", 1e-10);
  c.declare("spectrum-inclusion", 1e-12);
  c.declare("e-alpha-bound", 1e-8);
  c.declare("half-inverse-adjoint-vs-dense", 1e-10);
  c.declare("half-inverse-vs-dense", 1e-10);
  c.declare("preconditioner-vs-dense", 1e-9);
  c.declare("preconditioner-positive", 0.0);
  c.declare("clustering-slope", 3.0);
  c.declare("h-alpha-bound", 0.0);
  c.declare("sqrt-series-vs-schur", 1e-10);
  c.declare("theory-constants", 0.0);
  c.declare("minres-iterates-vs-dense", 1e-9);
  c.declare("minres-solution-vs-direct", 1e-9);
  c.declare("minres-natural-monotone", 0.0);
  c.declare("cluster-termination", 1.0);
  c.declare("iteration-bound", 1.0);
  c.declare("minres-exact-clusters", 2.0);

  transform_properties(c, rng);

  std::vector<SpectralBlttOperator> ops;
  for (const auto& size : options.sizes) {
    check_oracle_size(SpatialGrid{size.m, size.dims}.size(), size.steps);
    ops.push_back(random_admissible_operator(size, rng));
  }
  ops.push_back(SpectralBlttOperator::identity(SpatialGrid{2, 1}, 4));

  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto& op = ops[j];
    operator_properties(c, op, rng);
    double mu = 0.0, nu = 1.0;
    c.guard("theory-constants", describe(op), [&] {
      const auto tb = theory_bounds(op, 1.0, 0.5);
      mu = tb.mu;
      nu = tb.nu;
    });
    for (double alpha : {nu, 1e-2 * nu, 1e-4, 1e-8}) {
      alpha_properties(c, op, alpha, mu, nu, rng);
      bound_properties(c, op, alpha);
    }
    root_route_property(c, op, 1e-2);
    minres_properties(c, op, std::min(nu, 1e-2), rng);
    minres_properties(c, op, 1.0, rng);
    if (j == 0) clustering_slope(c, op);
  }

  family_properties(c, rng);
  convergence_bounds(c, rng);
  exact_clusters(c, rng);
  return c.take();
}

bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

} // namespace bltt
