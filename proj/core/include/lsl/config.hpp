#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lsl/analysis.hpp"
#include "lsl/kernel_system.hpp"

namespace lsl {

inline constexpr int kConfigSchemaVersion = 1;

/// Environment variable that overrides the output directory of a config
/// (a --out flag on the command line still wins).
inline constexpr const char* kOutputDirEnv = "LSL_OUTPUT_DIR";

/// Piece of the true medium. Rectangles are flat; bumps are cos² profiles of
/// the given radius around `center`.
struct Inclusion {
  enum class Shape { rectangle, bump };
  Shape shape = Shape::rectangle;
  Box box;                              // rectangle
  std::array<double, 2> center{0, 0};   // bump
  double radius = 0.0;                  // bump
  double amplitude = 0.0;               // 1/time²
};

enum class PropagatorKind { spectral, leapfrog };

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string scenario;

  std::vector<double> extents;
  std::vector<int> cells;
  std::vector<int> image_cells;

  std::vector<Inclusion> medium;
  std::vector<std::array<int, 2>> sources;

  double sigma = 1.0;
  double omega0 = 0.0;
  std::optional<double> tau;  // default π/(ω₀+4σ)
  int steps = 2;              // n: mass-matrix order per source

  std::vector<ImagingMode> modes;
  double lambda = 1e-2;
  bool nonnegative = false;
  double repair_tolerance = 1e-12;

  PropagatorKind propagator = PropagatorKind::spectral;
  std::optional<int> substeps;  // leapfrog; default from the CFL number
  double cfl_number = 0.5;

  double noise_level = 0.0;
  std::uint64_t seed = 0;

  std::optional<Box> shadow;
  std::optional<Box> support;
  bool internal_errors = false;  // per-step û / u⁰ errors against the truth
  int radial_bins = 0;           // > 0 enables the radial-average check

  std::filesystem::path output_dir = "out";

  Grid grid() const;
  Grid image_grid() const;
  double time_step() const;
};

/// Parses TOML text. Collects every problem and throws one ConfigError with
/// itemized diagnostics.
ExperimentConfig parse_config(std::string_view toml_text, const std::string& source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Semantic checks (sources in grid, n >= 2, image grid refinement, ...).
/// Returns diagnostics; empty when valid.
std::vector<std::string> validate(const ExperimentConfig& config);

/// True medium q on the forward grid.
GridFunction true_potential(const ExperimentConfig& config);

}  // namespace lsl
