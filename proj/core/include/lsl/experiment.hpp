#pragma once

#include <map>

#include "lsl/config.hpp"

namespace lsl {

struct ModeMetrics {
  double misfit = 0.0;
  bool degenerate = false;  // rhs ≡ 0
  double image_error = 0.0;
  double correlation = 0.0;
  std::optional<double> ghost_ratio;
};

struct SourceMetrics {
  int source = 0;
  std::vector<double> internal_error;    // relL2(û_k, u_k)
  std::vector<double> background_error;  // relL2(u⁰_k, u_k)
  /// ||rad(u/||u|| - u⁰/||u⁰||)|| / ||rad(v - v⁰)|| aggregated over
  /// post-arrival steps; nullopt when disabled or no arrival.
  std::optional<double> radial_ratio;
};

struct MetricsReport {
  std::string scenario;
  std::map<ImagingMode, ModeMetrics> modes;
  std::vector<SourceMetrics> sources;
};

/// Everything a run produces, kept in memory for tests.
struct ExperimentResult {
  MetricsReport metrics;
  GridFunction truth;  // on the image grid
  std::map<ImagingMode, ReflectivityImage> images;
  std::map<ImagingMode, KernelSystem> systems;
  std::vector<TransferSeries> measured;
  std::vector<TransferSeries> background;
};

/// Runs the monostatic pipeline: per-source simulation of measured and
/// background data, per-source ROMs, internal solutions, and one solve per
/// requested mode. Deterministic for a fixed config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes image_<mode>.{txt,pgm,meta}, transfer_j<j>.txt and metrics.json
/// into `directory` (created if missing).
void write_outputs(const ExperimentResult& result, const std::filesystem::path& directory);

std::string metrics_json(const MetricsReport& report);

/// Monostatic data store: only the diagonal F^{jj} is held, and asking for an
/// off-diagonal entry is a contract violation.
class MonostaticData {
 public:
  void add(TransferSeries series);
  const TransferSeries& response(int receiver, int source) const;
  std::span<const TransferSeries> diagonal() const noexcept { return series_; }

 private:
  std::vector<TransferSeries> series_;
};

}  // namespace lsl
