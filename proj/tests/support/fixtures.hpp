#pragma once

#include <random>

#include "lsl/experiment.hpp"

namespace lsl::testing {

/// Sum of three Gaussian bumps with random amplitudes in (50, 300) and
/// centers in (0.2, 0.9) on a 1D grid over (0, 1).
inline GridFunction smooth_random_potential(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(50.0, 300.0), pos(0.2, 0.9);
  GridFunction q(grid);
  for (int b = 0; b < 3; ++b) {
    const double a = amp(rng), c = pos(rng);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double x = grid.center(i)[0];
      q.values[i] += a * std::exp(-(x - c) * (x - c) / (2 * 0.05 * 0.05));
    }
  }
  return q;
}

inline Grid unit_interval(int cells) {
  const double extent[] = {1.0};
  const int n[] = {cells};
  return build_grid(extent, n);
}

inline Grid rectangle(double lx, double ly, int nx, int ny) {
  const double extent[] = {lx, ly};
  const int n[] = {nx, ny};
  return build_grid(extent, n);
}

/// Weighted Gram matrix of snapshot columns.
inline Eigen::MatrixXd gram(const SnapshotSet& s) {
  return s.grid.cell_volume() * s.values.transpose() * s.values;
}

/// 1D fixture shared by several checks: 101 cells, σ = 25, ω₀ = 0, source at
/// cell 0, n = 16, spectral propagation of a smooth random medium.
struct SisoFixture {
  Grid grid = unit_interval(101);
  GridFunction q = smooth_random_potential(grid, 7);
  PulseSpec pulse{25.0, 0.0, 0};
  int n = 16;
  double tau = default_time_step(pulse);
  SymmetricOperator background = background_operator(grid);
  SymmetricOperator truth = assemble_operator(grid, q);
  GridFunction g = source_pulse(background, pulse);
};

}  // namespace lsl::testing
