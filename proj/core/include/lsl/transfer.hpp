#pragma once

#include <vector>

#include "lsl/propagate.hpp"

namespace lsl {

/// Sampled transfer function F^{ji}(kτ) = <g_j, cos(√A kτ) g_i>.
struct TransferSeries {
  int source = 0;
  int receiver = 0;
  double tau = 0.0;
  Eigen::VectorXd samples;

  Eigen::Index length() const noexcept { return samples.size(); }
  /// Mass-matrix order this series supports: n for 2n-1 samples.
  Eigen::Index mass_order() const;
};

/// F(kτ) = <receiver_pulse, u_k> for every recorded snapshot.
TransferSeries record_transfer(const SnapshotSet& snapshots, const GridFunction& receiver_pulse,
                               int source = 0, int receiver = 0);

/// Full m x m response F(kτ) for every k (MIMO data). responses[k](j, i) = F^{ji}(kτ).
struct TransferMatrix {
  double tau = 0.0;
  std::vector<Eigen::MatrixXd> responses;

  Eigen::Index sources() const { return responses.empty() ? 0 : responses.front().rows(); }
  Eigen::Index length() const { return Eigen::Index(responses.size()); }
  /// The (j, i) entry as a scalar series.
  TransferSeries series(int receiver, int source) const;
};

/// Assembles a TransferMatrix from snapshot sets (one per source) and the
/// corresponding receiver pulses.
TransferMatrix record_transfer_matrix(std::span<const SnapshotSet> snapshots,
                                      std::span<const GridFunction> pulses);

}  // namespace lsl
