#pragma once

#include "bltt/minres.hpp"
#include "bltt/operator.hpp"
#include "bltt/spectral.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bltt {

enum class Family { HeatBdf, HeatCn, HeatVarCn, FracL1 };

std::string_view to_string(Family f);
/// Accepts "heat-bdf", "heat-cn", "heat-var-cn", "frac-l1".
Family parse_family(std::string_view name);

/// Diffusion coefficient a(x) of div(a grad u).
struct Coefficient {
  enum class Kind {
    Constant,   ///< a = value
    Product20,  ///< a = prod_d (20 + x_d^2)
    Power35,    ///< a = 35 + sum_d x_d^3.5
  };
  Kind kind = Kind::Constant;
  double value = 1.0;

  bool is_constant() const noexcept { return kind == Kind::Constant; }
  double operator()(std::span<const double> x) const;
  /// Partial derivative along coordinate `dim`.
  double derivative(std::span<const double> x, int dim) const;
};

std::string_view to_string(Coefficient::Kind k);
/// Accepts "constant", "product20", "power35".
Coefficient::Kind parse_coefficient(std::string_view name);

/// Forcing of the heat examples.
enum class HeatForcing {
  Printed,    ///< e^t [g - 1e-6 * Lap g], exact for a = 1e-6
  Consistent, ///< u_t - div(a grad u) for the exact solution u = e^t g
};

std::string_view to_string(HeatForcing f);
HeatForcing parse_heat_forcing(std::string_view name);

struct ProblemSpec {
  Family family = Family::HeatBdf;
  std::size_t m = 31;     ///< interior points per dimension
  std::size_t steps = 32; ///< N
  int dims = 2;
  double horizon = 1.0;   ///< T
  double lo = 0.0;        ///< domain (lo, hi)^d
  double hi = 1.0;
  double gamma = 0.5;     ///< fractional order, frac-l1 only
  Coefficient coefficient{};
  HeatForcing forcing = HeatForcing::Printed;

  double h() const { return (hi - lo) / static_cast<double>(m + 1); }
  double tau() const { return horizon / static_cast<double>(steps); }
  void validate() const;
};

/// Named configurations of the four benchmark examples. Example 1 uses
/// a = 1e-6, the coefficient for which its printed forcing is exact.
ProblemSpec example1(Family scheme, std::size_t m_plus_1, std::size_t steps);
ProblemSpec example2(std::size_t m_plus_1, std::size_t steps);
ProblemSpec example3(double gamma, std::size_t m_plus_1, std::size_t steps);
ProblemSpec example4(double gamma, std::size_t m_plus_1, std::size_t steps);

/// Exact solution u(x, t) at a spatial point of dimension d.
using ExactSolution = std::function<double(std::span<const double> x, double t)>;

/// A discretized all-at-once problem A u = f.
struct Problem {
  ProblemSpec spec;
  /// Spectral form used to build the preconditioner. Equals the true operator
  /// for constant coefficients and is the mean-coefficient surrogate otherwise.
  std::shared_ptr<const SpectralBlttOperator> spectral;
  /// True operator for variable coefficients (absent when `spectral` is exact).
  std::shared_ptr<const SparseBlttOperator> sparse;
  std::vector<double> rhs;
  ExactSolution exact;
  double mean_coefficient = 1.0;

  std::size_t size() const { return spectral->size(); }
  bool uses_surrogate() const { return sparse != nullptr; }
  /// out = A v with the true operator.
  LinearMap matvec() const;
  /// out = Y A v with the true operator.
  LinearMap symmetrized_matvec() const;
  /// Time-major vector of exact values at t_1..t_N.
  std::vector<double> exact_vector() const;
};

/// Eigenvalues of scale * Lap_h on the DST-I basis (mode index p + m q).
std::vector<double> laplacian_eigenvalues(std::size_t m, int dims, double h, double scale = 1.0);

/// Conservative central-difference matrix of div(a grad .) with homogeneous
/// Dirichlet data; a is sampled at arithmetic midpoints x +- h/2 e_d.
SparseMatrix laplacian_matrix(const ProblemSpec& spec, const Coefficient& a);

/// Interior grid point coordinates for mode index j (lexicographic, x1 fastest).
std::array<double, 2> grid_point(const ProblemSpec& spec, std::size_t j);

/// Mean of a over the interior grid points.
double mean_coefficient(const ProblemSpec& spec);

struct L1Weights {
  double gamma = 0.5;
  std::vector<double> l;      ///< l_k, k = 0..N-1
  std::vector<double> l_init; ///< l^{(k)}, k = 1..N (stored at index k-1)
};

/// L1-scheme weights of the Caputo derivative of order gamma on a uniform grid.
L1Weights l1_weights(double gamma, std::size_t steps, double tau);

Problem build_heat_bdf(const ProblemSpec& spec);
Problem build_heat_cn(const ProblemSpec& spec);
Problem build_heat_var_cn(const ProblemSpec& spec);
Problem build_frac_l1(const ProblemSpec& spec);
/// Dispatches on spec.family.
Problem build_problem(const ProblemSpec& spec);

} // namespace bltt
