#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "lsl/errors.hpp"

using namespace lsl;
using namespace lsl::testing;

TEST_CASE("build_grid") {
  SUBCASE("1D spacing and volume") {
    const Grid g = unit_interval(101);
    CHECK(g.dimension() == 1);
    CHECK(g.spacing(0) == doctest::Approx(1.0 / 101));
    CHECK(g.cell_volume() == doctest::Approx(1.0 / 101));
    CHECK(g.size() == 101);
  }
  SUBCASE("2D half-unit cells") {
    const Grid g = rectangle(300, 80, 600, 160);
    CHECK(g.dimension() == 2);
    CHECK(g.spacing(0) == 0.5);
    CHECK(g.spacing(1) == 0.5);
    CHECK(g.cell_volume() == 0.25);
  }
  SUBCASE("rejects degenerate input") {
    CHECK_THROWS_AS(unit_interval(1), ConfigError);
    const double bad[] = {-1.0};
    const int cells[] = {10};
    CHECK_THROWS_AS(build_grid(bad, cells), ConfigError);
  }
  SUBCASE("x-fastest indexing") {
    const Grid g = rectangle(2, 3, 4, 6);
    CHECK(g.index(1, 2) == 2 * 4 + 1);
  }
}

TEST_CASE("assemble_operator") {
  const Grid g = unit_interval(11);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.size());

  SUBCASE("Neumann Laplacian kills constants") {
    CHECK(background_operator(g).apply(ones).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("constant potential acts diagonally on constants") {
    GridFunction q(g);
    q.values.setConstant(3.5);
    const Eigen::VectorXd out = assemble_operator(g, q).apply(ones);
    CHECK((out - 3.5 * ones).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("symmetric in the weighted inner product") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (const Grid& grid : {g, rectangle(3, 2, 9, 7)}) {
      GridFunction q(grid);
      for (auto& v : q.values) v = std::abs(normal(rng)) * 50;
      const SymmetricOperator a = assemble_operator(grid, q);
      Eigen::VectorXd u(grid.size()), w(grid.size());
      for (auto& v : u) v = normal(rng);
      for (auto& v : w) v = normal(rng);
      const double lhs = inner(grid, a.apply(u), w);
      const double rhs = inner(grid, u, a.apply(w));
      const double scale = estimate_lambda_max(a) * weighted_norm(grid, u) * weighted_norm(grid, w);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
  SUBCASE("grid mismatch and non-finite q") {
    GridFunction other(unit_interval(12));
    CHECK_THROWS_AS(assemble_operator(g, other), ContractError);
    GridFunction q(g);
    q.values[2] = std::nan("");
    CHECK_THROWS_AS(assemble_operator(g, q), ContractError);
  }
  SUBCASE("dense matches apply") {
    GridFunction q(g);
    q.values.setLinSpaced(0.0, 10.0);
    const SymmetricOperator a = assemble_operator(g, q);
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(g.size(), -1.0, 2.0);
    CHECK((a.dense() * u - a.apply(u)).norm() < 1e-9 * a.apply(u).norm());
  }
}

TEST_CASE("spectral decomposition") {
  SUBCASE("separable and dense agree on the 2D background") {
    const Grid g = rectangle(3, 2, 9, 6);
    const SymmetricOperator a = background_operator(g);
    const Spectrum dense = Spectrum::dense(a);
    const Spectrum sep = Spectrum::separable(a);
    CHECK(sep.is_separable());
    CHECK(sep.is_background());
    const Eigen::VectorXd v = discrete_delta(g, g.index(4, 1)).values;
    const auto f = [](double l) { return std::cos(0.3 * std::sqrt(l)); };
    CHECK(relative_l2(sep.apply(f, v), dense.apply(f, v)) < 1e-12);
    CHECK(sep.lambda_max() == doctest::Approx(dense.lambda_max()).epsilon(1e-12));
  }
  SUBCASE("separable refuses a nonzero potential") {
    const Grid g = unit_interval(8);
    GridFunction q(g);
    q.values[3] = 1.0;
    CHECK_THROWS_AS(Spectrum::separable(assemble_operator(g, q)), ContractError);
  }
  SUBCASE("power iteration approaches the top of the spectrum from below") {
    // The leapfrog CFL check adds a 5% margin on top of this estimate.
    SisoFixture f;
    const double exact = Spectrum::dense(f.truth).lambda_max();
    const double estimate = estimate_lambda_max(f.truth);
    CHECK(estimate <= exact * (1 + 1e-12));
    CHECK(estimate >= 0.99 * exact);
  }
}

namespace {

// Diffusion oracle: explicit Euler for u' = -A₀ u from δ to t = 1/(4σ²).
Eigen::VectorXd heat_oracle(const SymmetricOperator& a, const GridFunction& delta, double t, int steps) {
  Eigen::VectorXd u = delta.values;
  Eigen::VectorXd au(u.size());
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    a.apply(u, au);
    u -= dt * au;
  }
  return u;
}

}  // namespace

TEST_CASE("source_pulse") {
  SUBCASE("non-modulated pulse is a scaled heat kernel") {
    const Grid g = unit_interval(101);
    const SymmetricOperator a = background_operator(g);
    const double sigma = 25.0;
    const GridFunction pulse = source_pulse(a, PulseSpec{sigma, 0.0, 40});
    const double scale = std::sqrt(std::sqrt(2 * std::numbers::pi) / sigma);
    const Eigen::VectorXd oracle = scale * heat_oracle(a, discrete_delta(g, 40), 1.0 / (4 * sigma * sigma), 1000000);
    CHECK(relative_l2(pulse.values, oracle) < 1e-6);
  }
  SUBCASE("wide spectrum approaches the scaled delta") {
    const Grid g = unit_interval(21);
    const SymmetricOperator a = background_operator(g);
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma : {50.0, 200.0, 800.0, 3200.0}) {
      const GridFunction pulse = source_pulse(a, PulseSpec{sigma, 0.0, 10});
      const double scale = std::sqrt(std::sqrt(2 * std::numbers::pi) / sigma);
      const double err = relative_l2(pulse.values / scale, discrete_delta(g, 10).values);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-3);
  }
  SUBCASE("F(0) is the pulse energy") {
    SisoFixture f;
    const SnapshotSet u = propagate_spectral(f.truth, f.g, 3, f.tau);
    const TransferSeries s = record_transfer(u, f.g);
    CHECK(s.samples[0] == doctest::Approx(inner(f.g, f.g)).epsilon(1e-14));
    CHECK(s.samples[0] > 0.0);
  }
  SUBCASE("needs the background operator") {
    SisoFixture f;
    CHECK_THROWS_AS(source_pulse(f.truth, f.pulse), ContractError);
  }
  SUBCASE("default time step") {
    CHECK(default_time_step(PulseSpec{25.0, 15.0, 0}) == doctest::Approx(std::numbers::pi / 115.0));
  }
}

TEST_CASE("propagate_spectral") {
  SisoFixture f;
  SUBCASE("first snapshot is the pulse") {
    const SnapshotSet u = propagate_spectral(f.truth, f.g, 4, f.tau);
    CHECK(relative_l2(u.values.col(0), f.g.values) < 1e-13);
    CHECK(u.count() == 4);
  }
  SUBCASE("cosine evenness in time") {
    const SnapshotSet a = propagate_spectral(f.truth, f.g, 5, f.tau);
    const SnapshotSet b = propagate_spectral(f.truth, f.g, 5, -f.tau);
    CHECK(a.values == b.values);
  }
  SUBCASE("closed-form Neumann cosine series") {
    // Discrete Neumann eigenpairs: λ_m = 4/h² sin²(mπ/2N), φ_m(i) = cos(mπ(i+½)/N).
    const int N = f.grid.size();
    const double h = f.grid.spacing(0);
    const int src = 0;
    const int count = 2 * f.n - 1;
    Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(N, count);
    for (int m = 0; m < N; ++m) {
      const double lambda = 4.0 / (h * h) * std::pow(std::sin(m * std::numbers::pi / (2.0 * N)), 2);
      Eigen::VectorXd phi(N);
      for (int i = 0; i < N; ++i) phi[i] = std::cos(m * std::numbers::pi * (i + 0.5) / N);
      const double coeff = phi[src] / (h * phi.squaredNorm());
      const double amp = std::sqrt(pulse_spectrum(f.pulse, std::sqrt(lambda)));
      for (int k = 0; k < count; ++k) oracle.col(k) += std::cos(std::sqrt(lambda) * k * f.tau) * amp * coeff * phi;
    }
    const SnapshotSet u = propagate_spectral(f.background, f.g, count, f.tau);
    for (int k = 0; k < count; ++k) CHECK(relative_l2(u.values.col(k), oracle.col(k)) < 1e-8);

    const TransferSeries s = record_transfer(u, f.g);
    for (int k = 0; k < count; ++k) {
      const double expected = inner(f.grid, oracle.col(0), oracle.col(k));
      CHECK(std::abs(s.samples[k] - expected) < 1e-8 * std::abs(s.samples[0]));
    }
  }
}

TEST_CASE("propagate_leapfrog") {
  SisoFixture f;
  const int count = 2 * f.n - 1;
  const SnapshotSet exact = propagate_spectral(f.truth, f.g, count, f.tau);
  auto worst = [&](int substeps) {
    const SnapshotSet u = propagate_leapfrog(f.truth, f.g, count, f.tau, substeps);
    double e = 0.0;
    for (int k = 0; k < count; ++k) e = std::max(e, relative_l2(u.values.col(k), exact.values.col(k)));
    return e;
  };

  SUBCASE("documented substep count matches the spectral oracle") {
    CHECK(worst(64) < 1e-3);
  }
  SUBCASE("second-order convergence") {
    const double order = std::log2(worst(32) / worst(64));
    CHECK(order >= 1.8);
  }
  SUBCASE("single snapshot is the pulse") {
    const SnapshotSet u = propagate_leapfrog(f.truth, f.g, 1, f.tau, 8);
    CHECK(u.count() == 1);
    CHECK(u.values.col(0) == f.g.values);
  }
  SUBCASE("CFL violation refuses to run") {
    CHECK_THROWS_AS(propagate_leapfrog(f.truth, f.g, 4, f.tau, 1), NumericalError);
  }
  SUBCASE("minimum substeps respects the CFL number") {
    const int s = minimum_substeps(f.truth, f.tau, 0.5);
    const double dt = f.tau / s;
    CHECK(dt * dt * Spectrum::dense(f.truth).lambda_max() / 4 <= 0.5);
    CHECK_NOTHROW(propagate_leapfrog(f.truth, f.g, 3, f.tau, s));
  }
  SUBCASE("antiderivative of the background field") {
    const Spectrum bg = Spectrum::of(f.background);
    const Wavefield exact_bg = simulate_spectral(bg, f.g, 8, f.tau);
    const Wavefield lf = simulate_leapfrog(f.background, f.g, 8, f.tau, 128);
    CHECK(lf.antiderivative.values.col(0).norm() == 0.0);
    for (int k = 1; k < 8; ++k) {
      CHECK(relative_l2(lf.antiderivative.values.col(k), exact_bg.antiderivative.values.col(k)) < 1e-3);
    }
  }
}

TEST_CASE("record_transfer") {
  SUBCASE("reciprocity of the spectral response matrix") {
    SisoFixture f;
    const Spectrum truth = Spectrum::dense(f.truth);
    const Spectrum bg = Spectrum::of(f.background);
    std::vector<SnapshotSet> sets;
    std::vector<GridFunction> pulses;
    for (Eigen::Index cell : {0, 30, 77}) {
      pulses.push_back(source_pulse(bg, PulseSpec{25.0, 0.0, cell}));
      sets.push_back(propagate_spectral(truth, pulses.back(), 9, f.tau));
    }
    const TransferMatrix data = record_transfer_matrix(sets, pulses);
    for (const auto& r : data.responses) {
      CHECK((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * r.cwiseAbs().maxCoeff());
    }
    CHECK(data.series(1, 2).samples[4] == data.responses[4](1, 2));
  }
  SUBCASE("grid mismatch") {
    SisoFixture f;
    const SnapshotSet u = propagate_spectral(f.truth, f.g, 2, f.tau);
    CHECK_THROWS_AS(record_transfer(u, GridFunction(unit_interval(50))), ContractError);
  }
  SUBCASE("odd length contract") {
    TransferSeries s;
    s.samples = Eigen::VectorXd::Ones(5);
    CHECK(s.mass_order() == 3);
    s.samples = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(s.mass_order(), ContractError);
  }
}
