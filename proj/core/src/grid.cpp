#include "lsl/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lsl/errors.hpp"

namespace lsl {

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << diagnostics.size() << " configuration problem(s):";
        for (const auto& d : diagnostics) os << "\n  - " << d;
        return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

CholeskyError::CholeskyError(int pivot, double value)
    : NumericalError("Cholesky: non-positive pivot " + std::to_string(value) + " at index " +
                     std::to_string(pivot)),
      pivot_(pivot),
      value_(value) {}

Grid build_grid(std::span<const double> extents, std::span<const int> cells) {
  if (extents.size() != cells.size() || extents.empty() || extents.size() > 2) {
    throw ConfigError("grid: need 1 or 2 axes with matching extents and cell counts");
  }
  Grid g;
  g.dimension_ = int(extents.size());
  for (std::size_t a = 0; a < extents.size(); ++a) {
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
      throw ConfigError("grid: extent along axis " + std::to_string(a) + " must be positive");
    }
    if (cells[a] < 2) {
      throw ConfigError("grid: need at least 2 cells along axis " + std::to_string(a));
    }
    g.extents_[a] = extents[a];
    g.cells_[a] = cells[a];
  }
  return g;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dimension_; ++a) v *= extents_[a] / cells_[a];
  return v;
}

std::array<double, 2> Grid::center(Eigen::Index i) const noexcept {
  const auto c = coords(i);
  std::array<double, 2> x{(c[0] + 0.5) * spacing(0), 0.0};
  if (dimension_ == 2) x[1] = (c[1] + 0.5) * spacing(1);
  return x;
}

bool Grid::contains(std::array<int, 2> cell) const noexcept {
  if (cell[0] < 0 || cell[0] >= cells_[0]) return false;
  if (dimension_ == 1) return cell[1] == 0;
  return cell[1] >= 0 && cell[1] < cells_[1];
}

GridFunction::GridFunction(Grid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ContractError("grid function has " + std::to_string(values.size()) + " values for " +
                        std::to_string(grid.size()) + " cells");
  }
}

double inner(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& u,
             const Eigen::Ref<const Eigen::VectorXd>& w) {
  return grid.cell_volume() * u.dot(w);
}

double weighted_norm(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& u) {
  return std::sqrt(inner(grid, u, u));
}

double inner(const GridFunction& u, const GridFunction& w) {
  if (!(u.grid == w.grid)) throw ContractError("inner product of functions on different grids");
  return inner(u.grid, u.values, w.values);
}

GridFunction discrete_delta(const Grid& grid, Eigen::Index cell) {
  if (cell < 0 || cell >= grid.size()) throw ContractError("delta source cell outside the grid");
  GridFunction d(grid);
  d.values[cell] = 1.0 / grid.cell_volume();
  return d;
}

double relative_l2(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  const double den = b.norm();
  const double num = (a - b).norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace lsl
