#pragma once

#include "lsl/transfer.hpp"

namespace lsl {

/// Gram matrix of snapshots, M_kl = <u_k, u_l>, built from transfer data.
///
/// For MIMO data the order is n*m with time-major ordering: index k*m + i is
/// source i at time kτ.
struct MassMatrix {
  Eigen::MatrixXd entries;
  int block_size = 1;
  int source = -1;  // monostatic source index, -1 when not tied to one source

  Eigen::Index order() const noexcept { return entries.rows(); }
};

/// Upper-triangular U with positive diagonal and M = UᵀU.
struct CholeskyFactor {
  Eigen::MatrixXd upper;
  int block_size = 1;  // carried over from the mass matrix

  Eigen::Index order() const noexcept { return upper.rows(); }
};

enum class SnapshotKind { true_field, background, data_generated, orthogonalized };

struct InternalSnapshotSet {
  SnapshotSet snapshots;
  SnapshotKind kind = SnapshotKind::data_generated;
  int block_size = 1;
};

/// M_kl = ½ (F(|k-l|τ) + F((k+l)τ)), k, l = 0..n-1, from 2n-1 samples.
/// Throws ContractError for an even-length series.
MassMatrix mass_from_siso(const TransferSeries& series);

/// Block version for a full m x m response: block (k, l) is
/// ½ (F(|k-l|τ) + F((k+l)τ)) with F the m x m response matrix. Throws
/// DataInconsistency if any response matrix is asymmetric beyond
/// `symmetry_tolerance` (relative to the largest entry of the whole series).
MassMatrix mass_from_mimo(const TransferMatrix& data, double symmetry_tolerance = 1e-10);

/// Raises eigenvalues below rel_tol * λ_max to that floor. The result is the
/// closest (Frobenius) symmetric matrix with spectrum bounded below by the
/// floor.
MassMatrix spectral_repair(const MassMatrix& mass, double rel_tol = 1e-12);

/// M = UᵀU. Throws CholeskyError with the failing pivot index.
CholeskyFactor cholesky_upper(const MassMatrix& mass);

/// v = u U⁻¹: Gram-Schmidt of the first n snapshots in time order, computed
/// by a triangular solve. For block factors the snapshot columns are
/// interleaved time-major across the sources.
InternalSnapshotSet orthogonalized_basis(const SnapshotSet& snapshots, const CholeskyFactor& factor);

/// Data-generated internal solutions û = u⁰ (U⁰)⁻¹ U.
InternalSnapshotSet internal_solutions(const SnapshotSet& background, const CholeskyFactor& background_factor,
                                       const CholeskyFactor& factor);

/// Interleaves per-source snapshot sets time-major (k*m + i) for block factors.
SnapshotSet interleave_sources(std::span<const SnapshotSet> per_source, Eigen::Index steps);

}  // namespace lsl
