#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

namespace lsl {

/// Uniform cell-centered grid on a box [0, L_x] (x [0, L_y]).
///
/// Cells are stored x-fastest: index = iy * cells(0) + ix. In 2D the second
/// axis is depth, so a "row" of the grid is a fixed iy.
class Grid {
 public:
  Grid() = default;

  int dimension() const noexcept { return dimension_; }
  double extent(int axis) const { return extents_.at(axis); }
  int cells(int axis) const { return cells_.at(axis); }
  double spacing(int axis) const { return extents_.at(axis) / cells_.at(axis); }

  /// Quadrature weight of one cell (length^d).
  double cell_volume() const noexcept;
  Eigen::Index size() const noexcept { return Eigen::Index(cells_[0]) * cells_[1]; }

  Eigen::Index index(int ix, int iy = 0) const noexcept {
    return Eigen::Index(iy) * cells_[0] + ix;
  }
  std::array<int, 2> coords(Eigen::Index i) const noexcept {
    return {int(i % cells_[0]), int(i / cells_[0])};
  }
  std::array<double, 2> center(Eigen::Index i) const noexcept;
  bool contains(std::array<int, 2> cell) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  friend Grid build_grid(std::span<const double>, std::span<const int>);

  int dimension_ = 0;
  std::array<double, 2> extents_{1.0, 1.0};
  std::array<int, 2> cells_{1, 1};
};

/// Throws ConfigError for non-positive extents, fewer than two cells per axis,
/// or a dimension other than 1 or 2.
Grid build_grid(std::span<const double> extents, std::span<const int> cells);

/// A real value per cell of a grid.
struct GridFunction {
  Grid grid;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(Grid g, Eigen::VectorXd v);
  explicit GridFunction(const Grid& g) : grid(g), values(Eigen::VectorXd::Zero(g.size())) {}
};

/// Cell-volume weighted inner product and norm.
double inner(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& u,
             const Eigen::Ref<const Eigen::VectorXd>& w);
double weighted_norm(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& u);
double inner(const GridFunction& u, const GridFunction& w);

/// Discrete point source: 1/cellVolume at `cell`, zero elsewhere.
GridFunction discrete_delta(const Grid& grid, Eigen::Index cell);

/// ||a - b|| / ||b|| in the plain Euclidean norm (weights cancel on uniform grids).
double relative_l2(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace lsl
