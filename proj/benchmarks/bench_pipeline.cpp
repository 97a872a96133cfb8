#include <random>

#include <benchmark/benchmark.h>

#include "lsl/experiment.hpp"

using namespace lsl;

namespace {

Grid fixture_grid() {
  const double extents[] = {150.0, 40.0};
  const int cells[] = {300, 80};
  return build_grid(extents, cells);
}

void BM_OperatorApply(benchmark::State& state) {
  const Grid g = fixture_grid();
  GridFunction q(g);
  q.values.head(g.size() / 2).setConstant(0.1);
  const SymmetricOperator a = assemble_operator(g, q);
  Eigen::VectorXd u = Eigen::VectorXd::Random(g.size()), out(g.size());
  for (auto _ : state) {
    a.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_OperatorApply);

void BM_LeapfrogSnapshots(benchmark::State& state) {
  const Grid g = fixture_grid();
  const SymmetricOperator a = background_operator(g);
  const GridFunction pulse = source_pulse(a, PulseSpec{0.5, 0.0, g.index(150, 0)});
  const int count = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_leapfrog(a, pulse, count, 3.14159265 / 2, 7));
}
BENCHMARK(BM_LeapfrogSnapshots)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SeparablePulse(benchmark::State& state) {
  const Grid g = fixture_grid();
  const Spectrum s = Spectrum::of(background_operator(g));
  for (auto _ : state) benchmark::DoNotOptimize(source_pulse(s, PulseSpec{0.5, 0.0, g.index(150, 0)}));
}
BENCHMARK(BM_SeparablePulse)->Unit(benchmark::kMillisecond);

void BM_Cholesky(benchmark::State& state) {
  const int n = int(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (auto& v : a.reshaped()) v = normal(rng);
  MassMatrix m;
  m.entries = a.transpose() * a + n * Eigen::MatrixXd::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(cholesky_upper(m));
}
BENCHMARK(BM_Cholesky)->Arg(64)->Arg(256);

void BM_KernelRows(benchmark::State& state) {
  const Grid g = fixture_grid();
  const double extents[] = {150.0, 40.0};
  const int image_cells[] = {150, 40};
  const Grid image = build_grid(extents, image_cells);
  const int n = int(state.range(0));
  SnapshotSet b{g, 1.0, Eigen::MatrixXd::Random(g.size(), n)};
  SnapshotSet u{g, 1.0, Eigen::MatrixXd::Random(g.size(), n)};
  for (auto _ : state) benchmark::DoNotOptimize(assemble_rows({&b, 1}, {&u, 1}, image));
}
BENCHMARK(BM_KernelRows)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const int rows = int(state.range(0));
  const double extents[] = {150.0, 40.0};
  const int image_cells[] = {150, 40};
  KernelSystem sys;
  sys.image_grid = build_grid(extents, image_cells);
  sys.sources = 1;
  sys.steps = rows;
  sys.tau = 1.0;
  sys.kernel = Eigen::MatrixXd::Random(rows, sys.image_grid.size());
  sys.rhs = Eigen::VectorXd::Random(rows);
  for (auto _ : state) benchmark::DoNotOptimize(solve_reflectivity(sys, {0.03, false}));
}
BENCHMARK(BM_Solve)->Arg(144)->Arg(576)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
