#pragma once

#include "lsl/pulse.hpp"

namespace lsl {

/// Wavefields u_k = u(kτ) for k = 0..count-1, one column per time sample.
struct SnapshotSet {
  Grid grid;
  double tau = 0.0;
  Eigen::MatrixXd values;  // grid.size() x count

  Eigen::Index count() const noexcept { return values.cols(); }
  GridFunction snapshot(Eigen::Index k) const { return {grid, values.col(k)}; }
  /// First `n` snapshots.
  SnapshotSet head(Eigen::Index n) const;
};

/// Field snapshots together with their running time integral ∫₀^{kτ} u dt.
/// The background antiderivative sin(√A₀ t)/√A₀ g is the Duhamel kernel of the
/// scattering equation.
struct Wavefield {
  SnapshotSet field;
  SnapshotSet antiderivative;
};

/// u_k = cos(√A kτ) g through an eigendecomposition of A.
SnapshotSet propagate_spectral(const SymmetricOperator& op, const GridFunction& g, int count, double tau);
SnapshotSet propagate_spectral(const Spectrum& spectrum, const GridFunction& g, int count, double tau);

/// Both u_k and ∫₀^{kτ} u = sin(√A kτ)/√A g, exactly.
Wavefield simulate_spectral(const Spectrum& spectrum, const GridFunction& g, int count, double tau);

/// Smallest substep count with (τ/s)² λ_max / 4 <= cfl_number.
int minimum_substeps(const SymmetricOperator& op, double tau, double cfl_number = 0.5);

/// Second-order leapfrog u^{m+1} = 2u^m - u^{m-1} - δt² A u^m, δt = τ/substeps,
/// zero initial velocity (u^{-1} = u^{1}); every substeps-th state is kept.
/// Throws NumericalError when δt² λ_max >= 4 (λ_max by power iteration).
SnapshotSet propagate_leapfrog(const SymmetricOperator& op, const GridFunction& g, int count,
                               double tau, int substeps);

/// Leapfrog run that also accumulates the trapezoidal time integral of u.
Wavefield simulate_leapfrog(const SymmetricOperator& op, const GridFunction& g, int count,
                            double tau, int substeps);

}  // namespace lsl
