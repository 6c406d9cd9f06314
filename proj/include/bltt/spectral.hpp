#pragma once

#include "bltt/transforms.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bltt {

/// Uniform interior grid of m points per dimension; the spatial transform
/// of an operator is the orthonormal DST-I on this grid.
struct SpatialGrid {
  std::size_t m = 1;
  int dims = 1;

  std::size_t size() const noexcept { return dims == 1 ? m : m * m; }
  Dst1Plan plan(std::size_t batch = 1, Dst1Backend backend = Dst1Backend::Native) const {
    return Dst1Plan(m, dims, batch, backend);
  }
};

/// BLTT operator in its canonical spectral form: every block satisfies
/// A_(k) = U diag(lambda_i^{(k)}) U^T with U the DST-I basis of `grid`.
///
/// The table is stored mode-major, eig(i, k) at index i*N + k, so the
/// temporal symbol of each spatial mode is contiguous.
class SpectralBlttOperator {
public:
  SpectralBlttOperator(SpatialGrid grid, std::size_t steps, std::vector<double> table,
                       std::string note = {});

  /// Operator with A_(0) = I and all other blocks zero.
  static SpectralBlttOperator identity(SpatialGrid grid, std::size_t steps);

  std::size_t modes() const noexcept { return grid_.size(); }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return modes() * steps_; }
  const SpatialGrid& grid() const noexcept { return grid_; }
  const std::string& note() const noexcept { return note_; }

  double eig(std::size_t mode, std::size_t k) const { return table_[mode * steps_ + k]; }
  std::span<const double> symbol(std::size_t mode) const {
    return std::span<const double>(table_).subspan(mode * steps_, steps_);
  }
  std::span<const double> table() const noexcept { return table_; }

private:
  SpatialGrid grid_;
  std::size_t steps_;
  std::vector<double> table_;
  std::string note_;
};

struct AdmissibilityReport {
  double c0 = 0.0;
  std::size_t min_index = 0;
  bool admissible = false;
};

/// c0 = min_i (lambda_i^{(0)} - sum_{k>=1} |lambda_i^{(k)}|); admissible iff c0 > 0.
AdmissibilityReport check_admissible(const SpectralBlttOperator& op);

/// Relative tolerance on ||offdiag(U^T A U)||_F / ||U^T A U||_F.
inline constexpr double kDiagonalizabilityTol = 1e-10;

/// Extracts the spectral table from dense symmetric blocks A_(0..N-1) that
/// are all diagonalized by the DST-I basis of `grid`.
/// Throws std::invalid_argument for non-symmetric or mis-sized blocks and
/// NotSimultaneouslyDiagonalizable when the off-diagonal residue is too large.
SpectralBlttOperator from_block_sequence(const std::vector<Eigen::MatrixXd>& blocks,
                                         SpatialGrid grid, std::string note = {});

/// Dense orthonormal DST-I matrix U of the grid (order m^d).
Eigen::MatrixXd dense_spatial_basis(const SpatialGrid& grid);

/// Columnar CSV dump: a `# m=<m> dims=<d> N=<N>` line, the header `i,k,lambda`,
/// then one row per table entry at full precision.
void write_operator_csv(std::ostream& os, const SpectralBlttOperator& op);
SpectralBlttOperator read_operator_csv(std::istream& is);

} // namespace bltt
