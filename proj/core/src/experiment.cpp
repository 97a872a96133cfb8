#include "lsl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>

#include <json.hpp>

#include "lsl/errors.hpp"
#include "lsl/raster.hpp"

namespace lsl {
namespace {

// A step counts as post-arrival once the scattered field is visible.
constexpr double kArrivalThreshold = 1e-3;

struct SourceRun {
  TransferSeries measured;
  TransferSeries background;
  std::map<ImagingMode, Eigen::MatrixXd> rows;
  SourceMetrics metrics;
};

CholeskyFactor factor_of(const TransferSeries& series, double tolerance) {
  return cholesky_upper(spectral_repair(mass_from_siso(series), tolerance));
}

std::optional<double> radial_ratio(const SnapshotSet& truth, const SnapshotSet& background,
                                   const CholeskyFactor& factor, const CholeskyFactor& background_factor,
                                   const std::array<double, 2>& center, int bins) {
  const Grid& grid = truth.grid;
  const InternalSnapshotSet v = orthogonalized_basis(truth, factor);
  const InternalSnapshotSet v0 = orthogonalized_basis(background, background_factor);
  double num = 0.0;
  double den = 0.0;
  bool arrived = false;
  for (Eigen::Index k = 0; k < truth.count(); ++k) {
    if (relative_l2(truth.values.col(k), background.values.col(k)) <= kArrivalThreshold) continue;
    arrived = true;
    const double nu = weighted_norm(grid, truth.values.col(k));
    const double nu0 = weighted_norm(grid, background.values.col(k));
    const GridFunction du(grid, truth.values.col(k) / nu - background.values.col(k) / nu0);
    const GridFunction dv(grid, v.snapshots.values.col(k) - v0.snapshots.values.col(k));
    num += std::pow(radial_norm(radial_average(du, center, bins)), 2);
    den += std::pow(radial_norm(radial_average(dv, center, bins)), 2);
  }
  if (!arrived || den == 0.0) return std::nullopt;
  return std::sqrt(num / den);
}

struct Propagators {
  const Spectrum& background_spectrum;
  const SymmetricOperator& background_op;
  const SymmetricOperator& truth_op;
  const Spectrum* truth_spectrum;  // spectral propagation only
  int substeps;                    // leapfrog only
};

// Each source draws its noise from its own stream seeded by (seed, j), so the
// result does not depend on scheduling.
SourceRun run_source(const ExperimentConfig& config, int j, const Propagators& p, const Grid& image_grid) {
  const Grid grid = config.grid();
  const int n = config.steps;
  const int count = 2 * n - 1;
  const double tau = config.time_step();
  const auto cell = config.sources[j];
  const PulseSpec pulse{config.sigma, config.omega0, grid.index(cell[0], cell[1])};
  const GridFunction g = source_pulse(p.background_spectrum, pulse);

  SnapshotSet truth;
  Wavefield background;
  if (config.propagator == PropagatorKind::spectral) {
    truth = propagate_spectral(*p.truth_spectrum, g, count, tau);
    background = simulate_spectral(p.background_spectrum, g, count, tau);
  } else {
    truth = propagate_leapfrog(p.truth_op, g, count, tau, p.substeps);
    background = simulate_leapfrog(p.background_op, g, count, tau, p.substeps);
  }

  SourceRun run;
  run.measured = record_transfer(truth, g, j, j);
  run.background = record_transfer(background.field, g, j, j);
  if (config.noise_level > 0.0) {
    std::seed_seq seq{std::uint32_t(config.seed), std::uint32_t(config.seed >> 32), std::uint32_t(j)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = config.noise_level * run.measured.samples.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < run.measured.length(); ++k) run.measured.samples[k] += scale * normal(rng);
  }

  // Only the first n snapshots enter the ROM and the kernels.
  truth = truth.head(n);
  const SnapshotSet u0 = background.field.head(n);
  const SnapshotSet b0 = background.antiderivative.head(n);
  background = {};

  const bool want_lsl = std::count(config.modes.begin(), config.modes.end(), ImagingMode::lsl) > 0;
  std::optional<CholeskyFactor> factor, background_factor;
  std::optional<InternalSnapshotSet> internal;
  if (want_lsl || config.internal_errors || config.radial_bins > 0) {
    factor = factor_of(run.measured, config.repair_tolerance);
    background_factor = factor_of(run.background, config.repair_tolerance);
    internal = internal_solutions(u0, *background_factor, *factor);
  }

  for (ImagingMode mode : config.modes) {
    const SnapshotSet& field = mode == ImagingMode::born      ? u0
                               : mode == ImagingMode::cheated ? truth
                                                              : internal->snapshots;
    run.rows[mode] = assemble_rows({&b0, 1}, {&field, 1}, image_grid).kernel;
  }

  run.metrics.source = j;
  run.metrics.background_error.resize(n);
  for (int k = 0; k < n; ++k) run.metrics.background_error[k] = relative_l2(u0.values.col(k), truth.values.col(k));
  if (config.internal_errors) {
    run.metrics.internal_error.resize(n);
    for (int k = 0; k < n; ++k) {
      run.metrics.internal_error[k] = relative_l2(internal->snapshots.values.col(k), truth.values.col(k));
    }
  }
  if (config.radial_bins > 0) {
    run.metrics.radial_ratio =
        radial_ratio(truth, u0, *factor, *background_factor, grid.center(pulse.source_cell), config.radial_bins);
  }
  return run;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (auto d = validate(config); !d.empty()) throw ConfigError(std::move(d));
  const Grid grid = config.grid();
  const Grid image_grid = config.image_grid();
  const int n = config.steps;
  const int m = int(config.sources.size());

  const GridFunction q = true_potential(config);
  const SymmetricOperator background_op = background_operator(grid);
  const SymmetricOperator truth_op = assemble_operator(grid, q);
  const Spectrum background_spectrum = Spectrum::of(background_op);
  std::optional<Spectrum> truth_spectrum;
  int substeps = 0;
  if (config.propagator == PropagatorKind::spectral) {
    truth_spectrum = Spectrum::of(truth_op);
  } else {
    substeps = config.substeps ? *config.substeps
                               : std::max(minimum_substeps(truth_op, config.time_step(), config.cfl_number),
                                          minimum_substeps(background_op, config.time_step(), config.cfl_number));
  }

  const Propagators propagators{background_spectrum, background_op, truth_op,
                                truth_spectrum ? &*truth_spectrum : nullptr, substeps};
  std::vector<SourceRun> runs(m);
  std::vector<std::exception_ptr> failures(m);
#if defined(LSL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int j = 0; j < m; ++j) {
    try {
      runs[j] = run_source(config, j, propagators, image_grid);
    } catch (...) {
      failures[j] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult result;
  result.metrics.scenario = config.scenario;
  result.truth = restrict_to(q, image_grid);
  MonostaticData measured;
  for (auto& run : runs) {
    measured.add(run.measured);
    result.background.push_back(run.background);
    result.metrics.sources.push_back(run.metrics);
  }
  for (int j = 0; j < m; ++j) result.measured.push_back(measured.response(j, j));
  const Eigen::VectorXd rhs = rhs_vector(result.background, result.measured, n);

  const SolveOptions options{config.lambda, config.nonnegative};
  for (ImagingMode mode : config.modes) {
    KernelSystem system;
    system.image_grid = image_grid;
    system.sources = m;
    system.steps = n;
    system.tau = config.time_step();
    system.kernel.resize(Eigen::Index(m) * n, image_grid.size());
    for (int j = 0; j < m; ++j) system.kernel.middleRows(Eigen::Index(j) * n, n) = runs[j].rows.at(mode);
    system.rhs = rhs;

    ModeMetrics metrics;
    metrics.degenerate = rhs.squaredNorm() == 0.0;
    ReflectivityImage image = solve_reflectivity(system, options, mode);
    metrics.misfit = misfit(system, image.values.values);
    const Box nowhere{};
    const ImageComparison cmp =
        compare_images(image.values, result.truth, config.shadow.value_or(nowhere), config.support);
    metrics.image_error = cmp.relative_error;
    metrics.correlation = cmp.correlation;
    if (config.shadow) metrics.ghost_ratio = cmp.ghost_ratio;

    result.metrics.modes[mode] = metrics;
    result.images.emplace(mode, std::move(image));
    result.systems.emplace(mode, std::move(system));
  }
  return result;
}

std::string metrics_json(const MetricsReport& report) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json out;
  out["schema_version"] = kConfigSchemaVersion;
  out["scenario"] = report.scenario;
  json modes = json::object();
  for (const auto& [mode, mm] : report.modes) {
    modes[std::string(to_string(mode))] = {
        {"misfit", number(mm.misfit)},
        {"degenerate", mm.degenerate},
        {"relative_error", number(mm.image_error)},
        {"correlation", number(mm.correlation)},
        {"ghost_ratio", mm.ghost_ratio ? number(*mm.ghost_ratio) : json(nullptr)},
    };
  }
  out["modes"] = modes;
  json sources = json::array();
  for (const auto& s : report.sources) {
    json entry{{"source", s.source}};
    json internal = json::array(), background = json::array();
    for (double e : s.internal_error) internal.push_back(number(e));
    for (double e : s.background_error) background.push_back(number(e));
    entry["internal_error"] = internal;
    entry["background_error"] = background;
    entry["radial_ratio"] = s.radial_ratio ? number(*s.radial_ratio) : json(nullptr);
    sources.push_back(entry);
  }
  out["sources"] = sources;
  return out.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw ConfigError("cannot create output directory " + directory.string() + ": " + ec.message());
  for (const auto& [mode, image] : result.images) {
    export_raster(image.values, directory / ("image_" + std::string(to_string(mode))));
  }
  for (std::size_t j = 0; j < result.measured.size(); ++j) {
    const auto path = directory / ("transfer_j" + std::to_string(j) + ".txt");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    const TransferSeries& f = result.measured[j];
    const TransferSeries& f0 = result.background[j];
    out << "# k t F F0\n";
    for (Eigen::Index k = 0; k < f.length(); ++k) {
      out << k << ' ' << format_double(double(k) * f.tau) << ' ' << format_double(f.samples[k]) << ' '
          << format_double(f0.samples[k]) << '\n';
    }
  }
  std::ofstream json(directory / "metrics.json");
  if (!json) throw ConfigError("cannot write " + (directory / "metrics.json").string());
  json << metrics_json(result.metrics);
}

void MonostaticData::add(TransferSeries series) {
  if (series.source != series.receiver) {
    throw ContractError("monostatic data holds only source == receiver series");
  }
  for (const auto& s : series_) {
    if (s.source == series.source) throw ContractError("duplicate series for source " + std::to_string(s.source));
  }
  series_.push_back(std::move(series));
}

const TransferSeries& MonostaticData::response(int receiver, int source) const {
  if (receiver != source) {
    throw ContractError("off-diagonal response F^{" + std::to_string(receiver) + std::to_string(source) +
                        "} is not part of monostatic data");
  }
  for (const auto& s : series_) {
    if (s.source == source) return s;
  }
  throw ContractError("no data for source " + std::to_string(source));
}

}  // namespace lsl
