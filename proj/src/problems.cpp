#include "bltt/problems.hpp"

#include "bltt/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace bltt {

namespace {

template <typename E, std::size_t K>
E parse_enum(std::string_view name, const std::array<E, K>& values, std::string_view what) {
  for (E v : values) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

} // namespace

std::string_view to_string(Family f) {
  switch (f) {
  case Family::HeatBdf: return "heat-bdf";
  case Family::HeatCn: return "heat-cn";
  case Family::HeatVarCn: return "heat-var-cn";
  case Family::FracL1: return "frac-l1";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  return parse_enum(name,
                    std::array{Family::HeatBdf, Family::HeatCn, Family::HeatVarCn, Family::FracL1},
                    "problem family");
}

std::string_view to_string(Coefficient::Kind k) {
  switch (k) {
  case Coefficient::Kind::Constant: return "constant";
  case Coefficient::Kind::Product20: return "product20";
  case Coefficient::Kind::Power35: return "power35";
  }
  return "?";
}

Coefficient::Kind parse_coefficient(std::string_view name) {
  return parse_enum(name,
                    std::array{Coefficient::Kind::Constant, Coefficient::Kind::Product20,
                               Coefficient::Kind::Power35},
                    "coefficient profile");
}

std::string_view to_string(HeatForcing f) {
  return f == HeatForcing::Printed ? "printed" : "consistent";
}

HeatForcing parse_heat_forcing(std::string_view name) {
  return parse_enum(name, std::array{HeatForcing::Printed, HeatForcing::Consistent},
                    "heat forcing");
}

double Coefficient::operator()(std::span<const double> x) const {
  switch (kind) {
  case Kind::Constant: return value;
  case Kind::Product20: {
    double a = 1.0;
    for (double s : x) a *= 20.0 + s * s;
    return a;
  }
  case Kind::Power35: {
    double a = 35.0;
    for (double s : x) a += std::pow(s, 3.5);
    return a;
  }
  }
  return value;
}

double Coefficient::derivative(std::span<const double> x, int dim) const {
  const auto d = static_cast<std::size_t>(dim);
  switch (kind) {
  case Kind::Constant: return 0.0;
  case Kind::Product20: {
    double a = 2.0 * x[d];
    for (std::size_t e = 0; e < x.size(); ++e)
      if (e != d) a *= 20.0 + x[e] * x[e];
    return a;
  }
  case Kind::Power35: return 3.5 * std::pow(x[d], 2.5);
  }
  return 0.0;
}

void ProblemSpec::validate() const {
  detail::require(m >= 1, "problem: m must be at least 1");
  detail::require(steps >= 1, "problem: N must be at least 1");
  detail::require(dims == 1 || dims == 2, "problem: dims must be 1 or 2");
  detail::require(horizon > 0.0, "problem: T must be positive");
  detail::require(hi > lo, "problem: domain must satisfy lo < hi");
  if (family == Family::FracL1) {
    detail::require(gamma > 0.0 && gamma < 1.0, "problem: gamma must lie in (0, 1)");
  }
  if (coefficient.is_constant()) {
    detail::require(coefficient.value > 0.0, "problem: constant coefficient must be positive");
  }
  if (coefficient.kind == Coefficient::Kind::Power35) {
    detail::require(lo >= 0.0, "problem: the power35 coefficient needs a domain with lo >= 0");
  }
}

ProblemSpec example1(Family scheme, std::size_t m_plus_1, std::size_t steps) {
  detail::require(scheme == Family::HeatBdf || scheme == Family::HeatCn,
                  "example1: scheme must be heat-bdf or heat-cn");
  detail::require(m_plus_1 >= 2, "example1: m+1 must be at least 2");
  ProblemSpec s;
  s.family = scheme;
  s.m = m_plus_1 - 1;
  s.steps = steps;
  s.coefficient.value = 1e-6;
  return s;
}

ProblemSpec example2(std::size_t m_plus_1, std::size_t steps) {
  detail::require(m_plus_1 >= 2, "example2: m+1 must be at least 2");
  ProblemSpec s;
  s.family = Family::HeatVarCn;
  s.m = m_plus_1 - 1;
  s.steps = steps;
  s.coefficient = {Coefficient::Kind::Product20, 1.0};
  s.forcing = HeatForcing::Consistent;
  return s;
}

ProblemSpec example3(double gamma, std::size_t m_plus_1, std::size_t steps) {
  detail::require(m_plus_1 >= 2, "example3: m+1 must be at least 2");
  ProblemSpec s;
  s.family = Family::FracL1;
  s.m = m_plus_1 - 1;
  s.steps = steps;
  s.hi = std::numbers::pi;
  s.gamma = gamma;
  return s;
}

ProblemSpec example4(double gamma, std::size_t m_plus_1, std::size_t steps) {
  detail::require(m_plus_1 >= 2, "example4: m+1 must be at least 2");
  ProblemSpec s;
  s.family = Family::FracL1;
  s.m = m_plus_1 - 1;
  s.steps = steps;
  s.gamma = gamma;
  s.coefficient = {Coefficient::Kind::Power35, 1.0};
  return s;
}

std::vector<double> laplacian_eigenvalues(std::size_t m, int dims, double h, double scale) {
  detail::require(m >= 1, "laplacian_eigenvalues: m must be at least 1");
  detail::require(dims == 1 || dims == 2, "laplacian_eigenvalues: dims must be 1 or 2");
  std::vector<double> one(m);
  const double c = 4.0 / (h * h);
  for (std::size_t p = 0; p < m; ++p) {
    const double s = std::sin(static_cast<double>(p + 1) * std::numbers::pi /
                              (2.0 * static_cast<double>(m + 1)));
    one[p] = -c * s * s;
  }
  if (dims == 1) {
    for (auto& v : one) v *= scale;
    return one;
  }
  std::vector<double> out(m * m);
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t p = 0; p < m; ++p) out[p + m * q] = scale * (one[p] + one[q]);
  return out;
}

std::array<double, 2> grid_point(const ProblemSpec& spec, std::size_t j) {
  const double h = spec.h();
  const std::size_t p = j % spec.m;
  const std::size_t q = j / spec.m;
  return {spec.lo + static_cast<double>(p + 1) * h,
          spec.dims == 2 ? spec.lo + static_cast<double>(q + 1) * h : 0.0};
}

namespace {

std::size_t spatial_size(const ProblemSpec& spec) {
  return spec.dims == 1 ? spec.m : spec.m * spec.m;
}

std::span<const double> coords(const ProblemSpec& spec, const std::array<double, 2>& x) {
  return std::span<const double>(x.data(), static_cast<std::size_t>(spec.dims));
}

} // namespace

double mean_coefficient(const ProblemSpec& spec) {
  const std::size_t count = spatial_size(spec);
  double sum = 0.0;
  for (std::size_t j = 0; j < count; ++j) sum += spec.coefficient(coords(spec, grid_point(spec, j)));
  return sum / static_cast<double>(count);
}

SparseMatrix laplacian_matrix(const ProblemSpec& spec, const Coefficient& a) {
  const std::size_t m = spec.m;
  const std::size_t count = spatial_size(spec);
  const double h = spec.h();
  const double inv_h2 = 1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(count * (1 + 2 * static_cast<std::size_t>(spec.dims)));
  for (std::size_t j = 0; j < count; ++j) {
    const auto x = grid_point(spec, j);
    const std::size_t idx[2] = {j % m, j / m};
    double diag = 0.0;
    for (int d = 0; d < spec.dims; ++d) {
      const std::size_t stride = d == 0 ? 1 : m;
      for (int side : {-1, 1}) {
        auto mid = x;
        mid[static_cast<std::size_t>(d)] += 0.5 * side * h;
        const double am = a(coords(spec, mid)) * inv_h2;
        diag -= am;
        const bool inside = side < 0 ? idx[d] > 0 : idx[d] + 1 < m;
        if (inside) {
          const std::size_t nb = side < 0 ? j - stride : j + stride;
          entries.emplace_back(static_cast<int>(j), static_cast<int>(nb), am);
        }
      }
    }
    entries.emplace_back(static_cast<int>(j), static_cast<int>(j), diag);
  }
  SparseMatrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

L1Weights l1_weights(double gamma, std::size_t steps, double tau) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("l1_weights: gamma must lie in (0, 1)");
  }
  detail::require(steps >= 1, "l1_weights: N must be at least 1");
  detail::require(tau > 0.0, "l1_weights: tau must be positive");
  L1Weights w;
  w.gamma = gamma;
  const double g = std::tgamma(2.0 - gamma);
  const double e = 1.0 - gamma;
  w.l.resize(steps);
  w.l_init.resize(steps);
  w.l[0] = 1.0 / g;
  for (std::size_t k = 1; k < steps; ++k) {
    const double kk = static_cast<double>(k);
    w.l[k] = (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e)) / g;
  }
  const double scale = 1.0 / (std::pow(tau, gamma) * g);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double kk = static_cast<double>(k);
    w.l_init[k - 1] = (std::pow(kk - 1.0, e) - std::pow(kk, e)) * scale;
  }
  return w;
}

namespace {

// Heat examples: u = e^t G(x), G = prod_d (x_d - lo)(x_d - hi).
struct HeatProfile {
  double lo, hi;
  double phi(double s) const { return (s - lo) * (s - hi); }
  double dphi(double s) const { return 2.0 * s - lo - hi; }

  double g(std::span<const double> x) const {
    double v = 1.0;
    for (double s : x) v *= phi(s);
    return v;
  }
  double partial(std::span<const double> x, std::size_t d) const {
    double v = dphi(x[d]);
    for (std::size_t e = 0; e < x.size(); ++e)
      if (e != d) v *= phi(x[e]);
    return v;
  }
  double laplacian(std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      double term = 2.0;
      for (std::size_t e = 0; e < x.size(); ++e)
        if (e != d) term *= phi(x[e]);
      v += term;
    }
    return v;
  }
  double div_a_grad(std::span<const double> x, const Coefficient& a) const {
    double v = a(x) * laplacian(x);
    for (std::size_t d = 0; d < x.size(); ++d)
      v += a.derivative(x, static_cast<int>(d)) * partial(x, d);
    return v;
  }
};

// Fractional examples: u = t^2 S(x), S = prod_d sin(pi (x_d - lo) / L).
struct FracProfile {
  double lo, hi;
  double k() const { return std::numbers::pi / (hi - lo); }
  double s(double x) const { return std::sin(k() * (x - lo)); }
  double ds(double x) const { return k() * std::cos(k() * (x - lo)); }

  double value(std::span<const double> x) const {
    double v = 1.0;
    for (double c : x) v *= s(c);
    return v;
  }
  double div_a_grad(std::span<const double> x, const Coefficient& a) const {
    const double sv = value(x);
    double v = -static_cast<double>(x.size()) * k() * k() * sv * a(x);
    for (std::size_t d = 0; d < x.size(); ++d) {
      double p = ds(x[d]);
      for (std::size_t e = 0; e < x.size(); ++e)
        if (e != d) p *= s(x[e]);
      v += a.derivative(x, static_cast<int>(d)) * p;
    }
    return v;
  }
};

using Forcing = std::function<double(std::span<const double>, double)>;

Forcing heat_forcing(const ProblemSpec& spec) {
  const HeatProfile prof{spec.lo, spec.hi};
  const Coefficient a = spec.coefficient;
  if (spec.forcing == HeatForcing::Printed) {
    return [prof](std::span<const double> x, double t) {
      return std::exp(t) * (prof.g(x) - 1e-6 * prof.laplacian(x));
    };
  }
  return [prof, a](std::span<const double> x, double t) {
    return std::exp(t) * (prof.g(x) - prof.div_a_grad(x, a));
  };
}

ExactSolution heat_exact(const ProblemSpec& spec) {
  const HeatProfile prof{spec.lo, spec.hi};
  return [prof](std::span<const double> x, double t) { return std::exp(t) * prof.g(x); };
}

// Samples a function of (x, t) on the interior grid into `out`.
void sample(const ProblemSpec& spec, const Forcing& f, double t, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(coords(spec, grid_point(spec, j)), t);
}

std::vector<double> initial_vector(const ProblemSpec& spec, const ExactSolution& exact) {
  std::vector<double> u0(spatial_size(spec));
  sample(spec, exact, 0.0, u0);
  return u0;
}

SparseMatrix identity(std::size_t n) {
  SparseMatrix id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  id.setIdentity();
  return id;
}

Problem base_problem(const ProblemSpec& spec) {
  spec.validate();
  Problem p;
  p.spec = spec;
  p.mean_coefficient = spec.coefficient.is_constant() ? spec.coefficient.value
                                                      : mean_coefficient(spec);
  return p;
}

SpatialGrid grid_of(const ProblemSpec& spec) { return SpatialGrid{spec.m, spec.dims}; }

Problem build_heat(const ProblemSpec& spec, bool crank_nicolson, bool force_sparse) {
  Problem p = base_problem(spec);
  const std::size_t mm = spatial_size(spec);
  const std::size_t n = spec.steps;
  const double tau = spec.tau();
  const auto mu = laplacian_eigenvalues(spec.m, spec.dims, spec.h(), p.mean_coefficient);

  std::vector<double> table(mm * n, 0.0);
  for (std::size_t i = 0; i < mm; ++i) {
    if (n == 0) break;
    if (crank_nicolson) {
      table[i * n] = 1.0 / tau - 0.5 * mu[i];
      if (n > 1) table[i * n + 1] = -1.0 / tau - 0.5 * mu[i];
    } else {
      table[i * n] = 1.0 / tau - mu[i];
      if (n > 1) table[i * n + 1] = -1.0 / tau;
    }
  }
  const std::string note = std::string(crank_nicolson ? "heat-cn" : "heat-bdf") +
                           (spec.coefficient.is_constant() ? "" : " (mean-coefficient surrogate)");
  p.spectral = std::make_shared<const SpectralBlttOperator>(grid_of(spec), n, std::move(table), note);

  const SparseMatrix lap = laplacian_matrix(spec, spec.coefficient);
  if (force_sparse || !spec.coefficient.is_constant()) {
    std::vector<SparseTerm> terms;
    terms.push_back({{1.0 / tau, -1.0 / tau}, identity(mm)});
    if (crank_nicolson) terms.push_back({{0.5, 0.5}, SparseMatrix(-lap)});
    else terms.push_back({{1.0}, SparseMatrix(-lap)});
    if (n == 1) {
      for (auto& t : terms) t.symbol.resize(1);
    }
    p.sparse = std::make_shared<const SparseBlttOperator>(mm, n, std::move(terms),
                                                          std::string(to_string(spec.family)));
  }

  p.exact = heat_exact(spec);
  const Forcing f = heat_forcing(spec);
  p.rhs.assign(mm * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = crank_nicolson ? (static_cast<double>(k) + 0.5) * tau
                                    : static_cast<double>(k + 1) * tau;
    sample(spec, f, t, std::span<double>(p.rhs).subspan(k * mm, mm));
  }
  const auto u0 = initial_vector(spec, p.exact);
  if (crank_nicolson) {
    // -(1/tau) L2 u0 = (1/tau) u0 + (1/2) Lap_a u0
    Eigen::Map<const Eigen::VectorXd> u(u0.data(), static_cast<Eigen::Index>(mm));
    const Eigen::VectorXd lu = lap * u;
    for (std::size_t j = 0; j < mm; ++j) p.rhs[j] += u0[j] / tau + 0.5 * lu[static_cast<Eigen::Index>(j)];
  } else {
    for (std::size_t j = 0; j < mm; ++j) p.rhs[j] += u0[j] / tau;
  }
  return p;
}

} // namespace

Problem build_heat_bdf(const ProblemSpec& spec) {
  detail::require(spec.family == Family::HeatBdf, "build_heat_bdf: family must be heat-bdf");
  return build_heat(spec, false, false);
}

Problem build_heat_cn(const ProblemSpec& spec) {
  detail::require(spec.family == Family::HeatCn, "build_heat_cn: family must be heat-cn");
  return build_heat(spec, true, false);
}

Problem build_heat_var_cn(const ProblemSpec& spec) {
  detail::require(spec.family == Family::HeatVarCn,
                  "build_heat_var_cn: family must be heat-var-cn");
  return build_heat(spec, true, true);
}

Problem build_frac_l1(const ProblemSpec& spec) {
  detail::require(spec.family == Family::FracL1, "build_frac_l1: family must be frac-l1");
  Problem p = base_problem(spec);
  const std::size_t mm = spatial_size(spec);
  const std::size_t n = spec.steps;
  const double tau = spec.tau();
  const double gamma = spec.gamma;
  const auto w = l1_weights(gamma, n, tau);
  const double tg = std::pow(tau, gamma);
  const auto mu = laplacian_eigenvalues(spec.m, spec.dims, spec.h(), p.mean_coefficient);

  std::vector<double> table(mm * n);
  for (std::size_t i = 0; i < mm; ++i) {
    table[i * n] = w.l[0] / tg - mu[i];
    for (std::size_t k = 1; k < n; ++k) table[i * n + k] = w.l[k] / tg;
  }
  const std::string note = std::string("frac-l1") +
                           (spec.coefficient.is_constant() ? "" : " (mean-coefficient surrogate)");
  p.spectral = std::make_shared<const SpectralBlttOperator>(grid_of(spec), n, std::move(table), note);

  if (!spec.coefficient.is_constant()) {
    std::vector<double> symbol(n);
    for (std::size_t k = 0; k < n; ++k) symbol[k] = w.l[k] / tg;
    std::vector<SparseTerm> terms;
    terms.push_back({std::move(symbol), identity(mm)});
    terms.push_back({{1.0}, SparseMatrix(-laplacian_matrix(spec, spec.coefficient))});
    p.sparse = std::make_shared<const SparseBlttOperator>(mm, n, std::move(terms), "frac-l1");
  }

  const FracProfile prof{spec.lo, spec.hi};
  const Coefficient a = spec.coefficient;
  const double cap = 2.0 / std::tgamma(3.0 - gamma);
  p.exact = [prof](std::span<const double> x, double t) { return t * t * prof.value(x); };
  const Forcing f = [prof, a, cap, gamma](std::span<const double> x, double t) {
    return cap * std::pow(t, 2.0 - gamma) * prof.value(x) - t * t * prof.div_a_grad(x, a);
  };
  p.rhs.assign(mm * n, 0.0);
  const auto u0 = initial_vector(spec, p.exact);
  for (std::size_t k = 0; k < n; ++k) {
    auto block = std::span<double>(p.rhs).subspan(k * mm, mm);
    sample(spec, f, static_cast<double>(k + 1) * tau, block);
    for (std::size_t j = 0; j < mm; ++j) block[j] -= w.l_init[k] * u0[j];
  }
  return p;
}

Problem build_problem(const ProblemSpec& spec) {
  switch (spec.family) {
  case Family::HeatBdf: return build_heat_bdf(spec);
  case Family::HeatCn: return build_heat_cn(spec);
  case Family::HeatVarCn: return build_heat_var_cn(spec);
  case Family::FracL1: return build_frac_l1(spec);
  }
  throw std::invalid_argument("build_problem: unknown family");
}

LinearMap Problem::matvec() const {
  if (sparse) {
    auto op = sparse;
    return [op](std::span<const double> in, std::span<double> out) { op->apply(in, out); };
  }
  auto fast = std::make_shared<const FastBlttOperator>(spectral);
  return [fast](std::span<const double> in, std::span<double> out) { fast->apply(in, out); };
}

LinearMap Problem::symmetrized_matvec() const {
  if (sparse) {
    auto op = sparse;
    return [op](std::span<const double> in, std::span<double> out) {
      op->apply_symmetrized(in, out);
    };
  }
  auto fast = std::make_shared<const FastBlttOperator>(spectral);
  return [fast](std::span<const double> in, std::span<double> out) {
    fast->apply_symmetrized(in, out);
  };
}

std::vector<double> Problem::exact_vector() const {
  const std::size_t mm = spatial_size(spec);
  std::vector<double> out(mm * spec.steps);
  for (std::size_t k = 0; k < spec.steps; ++k) {
    sample(spec, exact, static_cast<double>(k + 1) * spec.tau(),
           std::span<double>(out).subspan(k * mm, mm));
  }
  return out;
}

} // namespace bltt
