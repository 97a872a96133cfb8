#include "lsl/pulse.hpp"

#include <cmath>
#include <numbers>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

void check(const PulseSpec& p) {
  if (!(p.sigma > 0.0)) throw ContractError("pulse sigma must be positive");
  if (!(p.omega0 >= 0.0)) throw ContractError("pulse omega0 must be non-negative");
}

}  // namespace

double pulse_spectrum(const PulseSpec& p, double omega) {
  const double s2 = 2.0 * p.sigma * p.sigma;
  const double dm = omega - p.omega0;
  const double dp = omega + p.omega0;
  return std::sqrt(std::numbers::pi) / (std::numbers::sqrt2 * p.sigma) *
         (std::exp(-dm * dm / s2) + std::exp(-dp * dp / s2));
}

double default_time_step(const PulseSpec& p) {
  check(p);
  return std::numbers::pi / (p.omega0 + 4.0 * p.sigma);
}

GridFunction source_pulse(const SymmetricOperator& background, const PulseSpec& pulse) {
  if (!background.is_background()) {
    throw ContractError("source pulses are built from the background operator A0");
  }
  return source_pulse(Spectrum::separable(background), pulse);
}

GridFunction source_pulse(const Spectrum& background, const PulseSpec& pulse) {
  check(pulse);
  if (!background.is_background()) {
    throw ContractError("source pulses are built from the background operator A0");
  }
  const GridFunction delta = discrete_delta(background.grid(), pulse.source_cell);
  auto amplitude = [&pulse](double lambda) { return std::sqrt(pulse_spectrum(pulse, std::sqrt(lambda))); };
  return {background.grid(), background.apply(amplitude, delta.values)};
}

}  // namespace lsl
