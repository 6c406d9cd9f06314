#include "bltt/spectral.hpp"

#include "bltt/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace bltt {

SpectralBlttOperator::SpectralBlttOperator(SpatialGrid grid, std::size_t steps,
                                           std::vector<double> table, std::string note)
    : grid_(grid), steps_(steps), table_(std::move(table)), note_(std::move(note)) {
  detail::require(grid_.m > 0, "SpectralBlttOperator: m must be positive");
  detail::require(grid_.dims == 1 || grid_.dims == 2,
                  "SpectralBlttOperator: dims must be 1 or 2");
  detail::require(steps_ > 0, "SpectralBlttOperator: N must be positive");
  detail::require(table_.size() == grid_.size() * steps_,
                  "SpectralBlttOperator: table size must equal M*N");
  for (double v : table_) {
    detail::require(std::isfinite(v), "SpectralBlttOperator: non-finite block eigenvalue");
  }
}

SpectralBlttOperator SpectralBlttOperator::identity(SpatialGrid grid, std::size_t steps) {
  std::vector<double> table(grid.size() * steps, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) table[i * steps] = 1.0;
  return {grid, steps, std::move(table), "identity"};
}

AdmissibilityReport check_admissible(const SpectralBlttOperator& op) {
  AdmissibilityReport report;
  report.c0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < op.modes(); ++i) {
    const auto sym = op.symbol(i);
    double off = 0.0;
    for (std::size_t k = 1; k < sym.size(); ++k) off += std::abs(sym[k]);
    const double margin = sym[0] - off;
    if (margin < report.c0) {
      report.c0 = margin;
      report.min_index = i;
    }
  }
  report.admissible = report.c0 > 0.0;
  return report;
}

Eigen::MatrixXd dense_spatial_basis(const SpatialGrid& grid) {
  const std::size_t m = grid.m;
  const auto s = dense_sine_matrix(m);
  Eigen::MatrixXd u1(m, m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) u1(p, q) = s[p * m + q];
  if (grid.dims == 1) return u1;
  Eigen::MatrixXd u(m * m, m * m);
  // Lexicographic ordering, first coordinate fastest: index = p + m*q.
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t qq = 0; qq < m; ++qq)
      u.block(q * m, qq * m, m, m) = u1(q, qq) * u1;
  return u;
}

SpectralBlttOperator from_block_sequence(const std::vector<Eigen::MatrixXd>& blocks,
                                         SpatialGrid grid, std::string note) {
  detail::require(!blocks.empty(), "from_block_sequence: empty block sequence");
  const auto m_total = static_cast<Eigen::Index>(grid.size());
  const Eigen::MatrixXd u = dense_spatial_basis(grid);
  const std::size_t steps = blocks.size();
  std::vector<double> table(grid.size() * steps);

  for (std::size_t k = 0; k < steps; ++k) {
    const auto& a = blocks[k];
    if (a.rows() != m_total || a.cols() != m_total) {
      throw std::invalid_argument("from_block_sequence: block " + std::to_string(k) +
                                  " has the wrong size");
    }
    const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
    if ((a - a.transpose()).norm() > 1e-12 * scale) {
      throw std::invalid_argument("from_block_sequence: block " + std::to_string(k) +
                                  " is not symmetric");
    }
    const Eigen::MatrixXd d = u.transpose() * a * u;
    const double total = d.norm();
    const double off = (d - Eigen::MatrixXd(d.diagonal().asDiagonal())).norm();
    if (total > 0.0 && off > kDiagonalizabilityTol * total) {
      std::ostringstream msg;
      msg << "from_block_sequence: block " << k
          << " is not diagonalized by the sine basis (relative off-diagonal residue "
          << off / total << ")";
      throw NotSimultaneouslyDiagonalizable(msg.str());
    }
    for (Eigen::Index i = 0; i < m_total; ++i) table[static_cast<std::size_t>(i) * steps + k] = d(i, i);
  }
  return {grid, steps, std::move(table), std::move(note)};
}

void write_operator_csv(std::ostream& os, const SpectralBlttOperator& op) {
  os << "# m=" << op.grid().m << " dims=" << op.grid().dims << " N=" << op.steps() << '\n';
  os << "i,k,lambda\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < op.modes(); ++i)
    for (std::size_t k = 0; k < op.steps(); ++k) os << i << ',' << k << ',' << op.eig(i, k) << '\n';
}

SpectralBlttOperator read_operator_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw std::invalid_argument("operator csv: missing '# m=.. dims=.. N=..' line");
  }
  SpatialGrid grid;
  std::size_t steps = 0;
  {
    std::istringstream head(line.substr(2));
    std::string field;
    while (head >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("operator csv: bad header field");
      const auto key = field.substr(0, eq);
      const auto value = std::stoul(field.substr(eq + 1));
      if (key == "m") grid.m = value;
      else if (key == "dims") grid.dims = static_cast<int>(value);
      else if (key == "N") steps = value;
      else throw std::invalid_argument("operator csv: unknown header field " + key);
    }
  }
  detail::require(steps > 0, "operator csv: N missing from header");
  if (!std::getline(is, line) || line != "i,k,lambda") {
    throw std::invalid_argument("operator csv: expected column header 'i,k,lambda'");
  }
  std::vector<double> table(grid.size() * steps, std::numeric_limits<double>::quiet_NaN());
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t i = 0, k = 0;
    double v = 0.0;
    char c1 = 0, c2 = 0;
    if (!(row >> i >> c1 >> k >> c2 >> v) || c1 != ',' || c2 != ',') {
      throw std::invalid_argument("operator csv: malformed row '" + line + "'");
    }
    if (i >= grid.size() || k >= steps) throw std::invalid_argument("operator csv: index out of range");
    table[i * steps + k] = v;
    ++rows;
  }
  detail::require(rows == table.size(), "operator csv: incomplete table");
  return {grid, steps, std::move(table), "csv"};
}

} // namespace bltt
