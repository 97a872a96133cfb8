#include "lsl/analysis.hpp"

#include <cmath>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

void check_box(const Grid& grid, const Box& box) {
  for (int a = 0; a < grid.dimension(); ++a) {
    if (box.lower[a] > box.upper[a]) throw ContractError("region has lower corner above upper corner");
    if (box.lower[a] < 0.0 || box.upper[a] > grid.extent(a)) throw ContractError("region extends outside the grid");
  }
}

}  // namespace

bool Box::contains(const std::array<double, 2>& p, int dimension) const noexcept {
  for (int a = 0; a < dimension; ++a) {
    if (p[a] < lower[a] || p[a] > upper[a]) return false;
  }
  return true;
}

Eigen::VectorXd box_mask(const Grid& grid, const Box& box) {
  check_box(grid, box);
  Eigen::VectorXd mask(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) mask[i] = box.contains(grid.center(i), grid.dimension()) ? 1.0 : 0.0;
  return mask;
}

std::vector<std::optional<double>> radial_average(const GridFunction& field, const std::array<double, 2>& center,
                                                  int bins) {
  const Grid& g = field.grid;
  if (bins < 1) throw ContractError("radial average needs at least one bin");
  for (int a = 0; a < g.dimension(); ++a) {
    if (center[a] < 0.0 || center[a] > g.extent(a)) throw ContractError("radial average center outside the grid");
  }
  double rmax = 0.0;
  for (int cx = 0; cx < 2; ++cx) {
    for (int cy = 0; cy < (g.dimension() == 2 ? 2 : 1); ++cy) {
      const double dx = cx * g.extent(0) - center[0];
      const double dy = g.dimension() == 2 ? cy * g.extent(1) - center[1] : 0.0;
      rmax = std::max(rmax, std::hypot(dx, dy));
    }
  }
  const double width = rmax / bins;
  std::vector<double> sum(bins, 0.0);
  std::vector<long> count(bins, 0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto x = g.center(i);
    const double r = std::hypot(x[0] - center[0], g.dimension() == 2 ? x[1] - center[1] : 0.0);
    const int b = std::min(bins - 1, int(r / width));
    sum[b] += field.values[i];
    ++count[b];
  }
  std::vector<std::optional<double>> out(bins);
  for (int b = 0; b < bins; ++b) {
    if (count[b] > 0) out[b] = sum[b] / double(count[b]);
  }
  return out;
}

double radial_norm(const std::vector<std::optional<double>>& averages) {
  double s = 0.0;
  for (const auto& v : averages) {
    if (v) s += *v * *v;
  }
  return std::sqrt(s);
}

ImageComparison compare_images(const GridFunction& image, const GridFunction& truth, const Box& shadow,
                               const std::optional<Box>& support) {
  if (!(image.grid == truth.grid)) throw ContractError("image and truth live on different grids");
  const Eigen::VectorXd shadow_mask = box_mask(image.grid, shadow);
  Eigen::VectorXd support_mask;
  if (support) {
    support_mask = box_mask(image.grid, *support);
  } else {
    support_mask = (truth.values.array() != 0.0).cast<double>();
  }

  ImageComparison c;
  c.relative_error = relative_l2(image.values, truth.values);

  const Eigen::VectorXd a = image.values.array() - image.values.mean();
  const Eigen::VectorXd m = support_mask.array() - support_mask.mean();
  const double den = a.norm() * m.norm();
  c.correlation = den > 0.0 ? a.dot(m) / den : 0.0;

  const Eigen::VectorXd energy = image.values.cwiseAbs2();
  const double in_support = energy.dot(support_mask);
  const double in_shadow = energy.dot(shadow_mask);
  if (in_support > 0.0) c.ghost_ratio = in_shadow / in_support;
  return c;
}

GridFunction restrict_to(const GridFunction& fine, const Grid& coarse) {
  const Grid& g = fine.grid;
  if (g.dimension() != coarse.dimension()) throw ContractError("restriction between grids of different dimension");
  std::array<int, 2> factor{1, 1};
  for (int a = 0; a < g.dimension(); ++a) {
    if (g.cells(a) % coarse.cells(a) != 0 || std::abs(g.extent(a) - coarse.extent(a)) > 1e-12 * g.extent(a)) {
      throw ContractError("coarse grid is not an integer coarsening of the fine grid");
    }
    factor[a] = g.cells(a) / coarse.cells(a);
  }
  GridFunction out(coarse);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    out.values[coarse.index(c[0] / factor[0], c[1] / factor[1])] += fine.values[i];
  }
  out.values /= double(factor[0] * factor[1]);
  return out;
}

}  // namespace lsl
