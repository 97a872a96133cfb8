#include "lsl/rom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "lsl/errors.hpp"

namespace lsl {

MassMatrix mass_from_siso(const TransferSeries& series) {
  const Eigen::Index n = series.mass_order();
  const auto& f = series.samples;
  MassMatrix m;
  m.source = series.source == series.receiver ? series.source : -1;
  m.entries.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) m.entries(k, l) = 0.5 * (f[std::abs(k - l)] + f[k + l]);
  }
  return m;
}

namespace {

std::string format_relative(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

MassMatrix mass_from_mimo(const TransferMatrix& data, double symmetry_tolerance) {
  if (data.length() % 2 == 0) {
    throw ContractError("an n x n block mass matrix needs exactly 2n-1 samples; got " +
                        std::to_string(data.length()));
  }
  const Eigen::Index n = (data.length() + 1) / 2;
  const Eigen::Index m = data.sources();
  double scale = 0.0;
  for (const auto& r : data.responses) {
    if (r.rows() != m || r.cols() != m) throw ContractError("response matrices must all be m x m");
    scale = std::max(scale, r.cwiseAbs().maxCoeff());
  }
  for (Eigen::Index k = 0; k < data.length(); ++k) {
    const auto& r = data.responses[k];
    const double asym = (r - r.transpose()).cwiseAbs().maxCoeff();
    if (asym > symmetry_tolerance * scale) {
      throw DataInconsistency("response matrix at sample " + std::to_string(k) + " is not symmetric (" +
                              format_relative(asym / scale) + " relative)");
    }
  }
  MassMatrix mass;
  mass.block_size = int(m);
  mass.entries.resize(n * m, n * m);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      mass.entries.block(k * m, l * m, m, m) =
          0.5 * (data.responses[std::abs(k - l)] + data.responses[k + l]);
    }
  }
  return mass;
}

MassMatrix spectral_repair(const MassMatrix& mass, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mass.entries);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of the mass matrix failed");
  Eigen::VectorXd values = solver.eigenvalues();
  const double floor = rel_tol * values.maxCoeff();
  if ((values.array() >= floor).all()) return mass;
  values = values.cwiseMax(floor);
  MassMatrix repaired = mass;
  const auto& q = solver.eigenvectors();
  repaired.entries = q * values.asDiagonal() * q.transpose();
  repaired.entries = 0.5 * (repaired.entries + repaired.entries.transpose()).eval();
  return repaired;
}

CholeskyFactor cholesky_upper(const MassMatrix& mass) {
  const auto& a = mass.entries;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ContractError("mass matrix must be square");
  CholeskyFactor f;
  f.block_size = mass.block_size;
  f.upper = Eigen::MatrixXd::Zero(n, n);
  auto& u = f.upper;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - u.col(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) throw CholeskyError(int(j), pivot);
    const double d = std::sqrt(pivot);
    u(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      u(j, i) = (a(j, i) - u.col(j).head(j).dot(u.col(i).head(j))) / d;
    }
  }
  return f;
}

InternalSnapshotSet orthogonalized_basis(const SnapshotSet& snapshots, const CholeskyFactor& factor) {
  if (snapshots.count() != factor.order()) {
    throw ContractError("orthogonalization needs as many snapshots as the factor order");
  }
  InternalSnapshotSet v;
  v.kind = SnapshotKind::orthogonalized;
  v.block_size = factor.block_size;
  v.snapshots = {snapshots.grid, snapshots.tau,
                 factor.upper.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(snapshots.values)};
  return v;
}

InternalSnapshotSet internal_solutions(const SnapshotSet& background, const CholeskyFactor& background_factor,
                                       const CholeskyFactor& factor) {
  if (background_factor.order() != factor.order() || background.count() != factor.order() ||
      background_factor.block_size != factor.block_size) {
    throw ContractError("internal solutions need matching orders for u0, U0 and U");
  }
  const Eigen::MatrixXd transform = background_factor.upper.triangularView<Eigen::Upper>().solve(factor.upper);
  InternalSnapshotSet u;
  u.kind = SnapshotKind::data_generated;
  u.block_size = factor.block_size;
  u.snapshots = {background.grid, background.tau, background.values * transform};
  return u;
}

SnapshotSet interleave_sources(std::span<const SnapshotSet> per_source, Eigen::Index steps) {
  if (per_source.empty()) throw ContractError("no snapshot sets to interleave");
  const Eigen::Index m = Eigen::Index(per_source.size());
  const SnapshotSet& first = per_source.front();
  SnapshotSet out{first.grid, first.tau, Eigen::MatrixXd(first.grid.size(), steps * m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    if (per_source[i].count() < steps || !(per_source[i].grid == first.grid)) {
      throw ContractError("snapshot sets differ in grid or are too short");
    }
    for (Eigen::Index k = 0; k < steps; ++k) out.values.col(k * m + i) = per_source[i].values.col(k);
  }
  return out;
}

}  // namespace lsl
