#pragma once

#include "lsl/spectral.hpp"

namespace lsl {

/// Modulated Gaussian f(t) = exp(-σ²t²/2) cos(ω₀t) emitted at one grid cell.
struct PulseSpec {
  double sigma = 1.0;
  double omega0 = 0.0;
  Eigen::Index source_cell = 0;
};

/// Fourier transform of f:
///   f̂(ω) = √π/(√2σ) (exp(-(ω-ω₀)²/(2σ²)) + exp(-(ω+ω₀)²/(2σ²))).
double pulse_spectrum(const PulseSpec& pulse, double omega);

/// τ = π / (ω₀ + 4σ): Nyquist sampling of the pulse band.
double default_time_step(const PulseSpec& pulse);

/// g = sqrt(f̂(√A₀)) δ_source, applied through the spectral decomposition of
/// the background operator. For ω₀ = 0 this is the scaled heat kernel
/// (√(2π)/σ)^{1/2} exp(-A₀/(4σ²)) δ.
GridFunction source_pulse(const SymmetricOperator& background, const PulseSpec& pulse);
/// Same, reusing a decomposition of A₀ across many sources.
GridFunction source_pulse(const Spectrum& background, const PulseSpec& pulse);

}  // namespace lsl
