#include "lsl/propagate.hpp"

#include <cmath>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

// Power iteration converges to λ_max from below; the margin keeps the
// CFL check on the safe side.
constexpr double kLambdaMargin = 1.05;

void check_inputs(const Grid& grid, const GridFunction& g, int count, double tau) {
  if (!(g.grid == grid)) throw ContractError("initial state lives on a different grid");
  if (count < 1) throw ContractError("need at least one snapshot");
  if (!std::isfinite(tau)) throw ContractError("time step must be finite");
}

double sinc_integral(double lambda, double t) {
  // sin(√λ t)/√λ, continuous at λ = 0
  const double w = std::sqrt(lambda);
  if (w * std::abs(t) < 1e-6) return t * (1.0 - lambda * t * t / 6.0);
  return std::sin(w * t) / w;
}

Wavefield leapfrog(const SymmetricOperator& op, const GridFunction& g, int count, double tau, int substeps,
                   bool integrate) {
  check_inputs(op.grid(), g, count, tau);
  if (substeps < 1) throw ContractError("leapfrog needs at least one substep");
  const double dt = tau / substeps;
  const double lambda_max = kLambdaMargin * estimate_lambda_max(op);
  if (dt * dt * lambda_max >= 4.0) {
    throw NumericalError("leapfrog CFL violation: (tau/substeps)^2 * lambda_max = " +
                         std::to_string(dt * dt * lambda_max) + " >= 4");
  }

  const Eigen::Index n = g.values.size();
  Wavefield out;
  out.field = {op.grid(), tau, Eigen::MatrixXd(n, count)};
  if (integrate) out.antiderivative = {op.grid(), tau, Eigen::MatrixXd(n, count)};
  out.field.values.col(0) = g.values;
  if (integrate) out.antiderivative.values.col(0).setZero();
  if (count == 1) return out;

  const double dt2 = dt * dt;
  Eigen::VectorXd prev = g.values;
  Eigen::VectorXd cur(n), next(n), au(n);
  op.apply(prev, au);
  cur = prev - 0.5 * dt2 * au;  // zero initial velocity
  Eigen::VectorXd integral;
  if (integrate) integral = 0.5 * dt * (prev + cur);

  const long total = long(count - 1) * substeps;
  for (long m = 1; m <= total; ++m) {
    if (m % substeps == 0) {
      const Eigen::Index k = m / substeps;
      out.field.values.col(k) = cur;
      if (integrate) out.antiderivative.values.col(k) = integral;
    }
    if (m == total) break;
    op.apply(cur, au);
    next = 2.0 * cur - prev - dt2 * au;
    if (integrate) integral += 0.5 * dt * (cur + next);
    prev.swap(cur);
    cur.swap(next);
  }
  return out;
}

}  // namespace

SnapshotSet SnapshotSet::head(Eigen::Index n) const {
  if (n > count()) throw ContractError("asked for more snapshots than recorded");
  return {grid, tau, values.leftCols(n)};
}

SnapshotSet propagate_spectral(const SymmetricOperator& op, const GridFunction& g, int count, double tau) {
  check_inputs(op.grid(), g, count, tau);
  return propagate_spectral(Spectrum::of(op), g, count, tau);
}

SnapshotSet propagate_spectral(const Spectrum& spectrum, const GridFunction& g, int count, double tau) {
  check_inputs(spectrum.grid(), g, count, tau);
  std::vector<Spectrum::Function> fs;
  fs.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = k * tau;
    fs.emplace_back([t](double lambda) { return std::cos(std::sqrt(lambda) * t); });
  }
  return {spectrum.grid(), tau, spectrum.apply_many(fs, g.values)};
}

Wavefield simulate_spectral(const Spectrum& spectrum, const GridFunction& g, int count, double tau) {
  check_inputs(spectrum.grid(), g, count, tau);
  std::vector<Spectrum::Function> fs;
  fs.reserve(2 * count);
  for (int k = 0; k < count; ++k) {
    const double t = k * tau;
    fs.emplace_back([t](double lambda) { return std::cos(std::sqrt(lambda) * t); });
  }
  for (int k = 0; k < count; ++k) {
    const double t = k * tau;
    fs.emplace_back([t](double lambda) { return sinc_integral(lambda, t); });
  }
  Eigen::MatrixXd both = spectrum.apply_many(fs, g.values);
  return {{spectrum.grid(), tau, both.leftCols(count)}, {spectrum.grid(), tau, both.rightCols(count)}};
}

int minimum_substeps(const SymmetricOperator& op, double tau, double cfl_number) {
  if (!(cfl_number > 0.0 && cfl_number < 1.0)) throw ContractError("CFL number must lie in (0, 1)");
  const double lambda_max = kLambdaMargin * estimate_lambda_max(op);
  // (τ/s)² λ_max / 4 <= cfl  <=>  s >= τ sqrt(λ_max / (4 cfl))
  return std::max(1, int(std::ceil(std::abs(tau) * std::sqrt(lambda_max / (4.0 * cfl_number)))));
}

SnapshotSet propagate_leapfrog(const SymmetricOperator& op, const GridFunction& g, int count, double tau,
                               int substeps) {
  return leapfrog(op, g, count, tau, substeps, false).field;
}

Wavefield simulate_leapfrog(const SymmetricOperator& op, const GridFunction& g, int count, double tau,
                            int substeps) {
  return leapfrog(op, g, count, tau, substeps, true);
}

}  // namespace lsl
