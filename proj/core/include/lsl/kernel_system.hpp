#pragma once

#include <string_view>

#include "lsl/rom.hpp"

namespace lsl {

enum class ImagingMode { born, lsl, cheated };

std::string_view to_string(ImagingMode mode);
/// Throws ConfigError for anything but "born", "lsl", "cheated".
ImagingMode parse_mode(std::string_view name);

/// Discretized scattering equation
///   F₀ʲʲ(kτ) - Fʲʲ(kτ) = ∫₀^{kτ} ∫ B⁽ʲ⁾(x, kτ-t) u⁽ʲ⁾(x, t) q(x) dx dt
/// where B⁽ʲ⁾ is the background antiderivative sin(√A₀ t)/√A₀ gⱼ.
/// Row j*steps + k holds source j at time kτ; columns are image cells.
struct KernelSystem {
  Grid image_grid;
  int sources = 0;
  int steps = 0;
  double tau = 0.0;
  Eigen::MatrixXd kernel;
  Eigen::VectorXd rhs;

  Eigen::Index rows() const noexcept { return kernel.rows(); }
  Eigen::Index row(int source, int k) const noexcept { return Eigen::Index(source) * steps + k; }

  /// Rows divided by their max |entry| (rhs scaled alike). Identically zero
  /// rows are removed, or kept unscaled when `drop_zero_rows` is false.
  KernelSystem row_normalized(bool drop_zero_rows = true) const;
};

/// Trapezoidal time quadrature at the native step τ:
///   K[(j,k), c] = τ Σ''_{l=0..k} B⁽ʲ⁾((k-l)τ)(x) u⁽ʲ⁾(lτ)(x),
/// integrated over each image cell (the forward grid must refine the image
/// grid by integer factors). The rhs is left at zero; see rhs_vector.
KernelSystem assemble_rows(std::span<const SnapshotSet> background_antiderivative,
                           std::span<const SnapshotSet> internal, const Grid& image_grid);

/// (j,k) -> F₀ʲʲ(kτ) - Fʲʲ(kτ), k = 0..steps-1.
Eigen::VectorXd rhs_vector(std::span<const TransferSeries> background, std::span<const TransferSeries> measured,
                           int steps);

struct SolveOptions {
  /// Tikhonov weight relative to the largest singular value of the
  /// row-normalized kernel.
  double lambda = 1e-2;
  /// Clip negative reflectivity to zero after the solve.
  bool nonnegative = false;
};

struct ReflectivityImage {
  GridFunction values;
  ImagingMode mode = ImagingMode::lsl;
  /// Numerical rank of the row-normalized kernel when lambda == 0, else -1.
  Eigen::Index effective_rank = -1;
  bool rank_deficient = false;
};

/// argmin ||K q - b||² + (λ s_max)² ||q||² on the row-normalized system.
/// λ = 0 returns the minimum-norm least-squares solution and reports rank.
ReflectivityImage solve_reflectivity(const KernelSystem& system, const SolveOptions& options,
                                     ImagingMode mode = ImagingMode::lsl);

/// Largest singular value by power iteration on KᵀK.
double largest_singular_value(const Eigen::MatrixXd& kernel, int iterations = 300);

/// ||Kq - b|| / ||b|| on the row-normalized system (zero kernel rows kept, so
/// data they cannot explain still counts). 0 when both vanish, +inf when
/// b = 0 but Kq != 0.
double misfit(const KernelSystem& system, const Eigen::Ref<const Eigen::VectorXd>& q);

}  // namespace lsl
