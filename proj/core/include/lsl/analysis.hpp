#pragma once

#include <optional>
#include <vector>

#include "lsl/grid.hpp"

namespace lsl {

/// Axis-aligned box in physical coordinates; a cell belongs to it when its
/// center lies inside (boundaries inclusive).
struct Box {
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{0.0, 0.0};

  bool contains(const std::array<double, 2>& point, int dimension) const noexcept;
};

/// Cell mask of a box on a grid. Throws ContractError if the box lies
/// outside the grid domain.
Eigen::VectorXd box_mask(const Grid& grid, const Box& box);

/// Mean of field values binned by distance to `center` (a physical point in
/// the domain). Bins are equal-width up to the largest in-domain radius;
/// bins with no cells are std::nullopt.
std::vector<std::optional<double>> radial_average(const GridFunction& field, const std::array<double, 2>& center,
                                                  int bins);

/// L2 norm over the nonempty bins.
double radial_norm(const std::vector<std::optional<double>>& averages);

struct ImageComparison {
  double relative_error = 0.0;
  /// Normalized cross-correlation with the truth support mask.
  double correlation = 0.0;
  /// Σ_shadow a² / Σ_support a²; nullopt when both sums vanish.
  std::optional<double> ghost_ratio;
};

/// Compares an image with the truth. The support mask is `support` if given,
/// else the cells where truth is nonzero.
ImageComparison compare_images(const GridFunction& image, const GridFunction& truth, const Box& shadow,
                               const std::optional<Box>& support = std::nullopt);

/// Cell averages of a forward-grid function over a coarser image grid that
/// it refines by integer factors.
GridFunction restrict_to(const GridFunction& fine, const Grid& coarse);

}  // namespace lsl
