#include "lsl/transfer.hpp"

#include "lsl/errors.hpp"

namespace lsl {

Eigen::Index TransferSeries::mass_order() const {
  if (samples.size() % 2 == 0) {
    throw ContractError("an n x n mass matrix needs exactly 2n-1 samples; got " + std::to_string(samples.size()));
  }
  return (samples.size() + 1) / 2;
}

TransferSeries record_transfer(const SnapshotSet& snapshots, const GridFunction& receiver_pulse, int source,
                               int receiver) {
  if (!(snapshots.grid == receiver_pulse.grid)) throw ContractError("receiver pulse lives on a different grid");
  TransferSeries s;
  s.source = source;
  s.receiver = receiver;
  s.tau = snapshots.tau;
  s.samples = snapshots.grid.cell_volume() * (snapshots.values.transpose() * receiver_pulse.values);
  return s;
}

TransferSeries TransferMatrix::series(int receiver, int source) const {
  TransferSeries s;
  s.source = source;
  s.receiver = receiver;
  s.tau = tau;
  s.samples.resize(length());
  for (Eigen::Index k = 0; k < length(); ++k) s.samples[k] = responses[k](receiver, source);
  return s;
}

TransferMatrix record_transfer_matrix(std::span<const SnapshotSet> snapshots, std::span<const GridFunction> pulses) {
  if (snapshots.size() != pulses.size() || snapshots.empty()) {
    throw ContractError("need one snapshot set per source pulse");
  }
  const Eigen::Index m = Eigen::Index(pulses.size());
  const Eigen::Index count = snapshots.front().count();
  TransferMatrix data;
  data.tau = snapshots.front().tau;
  data.responses.assign(count, Eigen::MatrixXd(m, m));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (snapshots[i].count() != count || snapshots[i].tau != data.tau) {
      throw ContractError("snapshot sets differ in length or time step");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      const TransferSeries s = record_transfer(snapshots[i], pulses[j], int(i), int(j));
      for (Eigen::Index k = 0; k < count; ++k) data.responses[k](j, i) = s.samples[k];
    }
  }
  return data;
}

}  // namespace lsl
