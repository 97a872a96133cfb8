#pragma once

#include <filesystem>

#include "lsl/grid.hpp"

namespace lsl {

struct RasterFiles {
  std::filesystem::path text;
  std::filesystem::path pgm;
  std::filesystem::path meta;
};

/// Writes <stem>.txt (one line per grid row, space separated, shortest
/// round-trip decimal independent of locale), <stem>.pgm (binary P5, 8 bit) and <stem>.meta. Pixels are
/// round(255 (v - min) / (max - min)); a constant image maps to all zeros and
/// the sidecar records zero dynamic range. Throws ConfigError when a file
/// cannot be written, ContractError for non-finite values.
RasterFiles export_raster(const GridFunction& image, const std::filesystem::path& stem);

/// Reads a text raster back (rows x columns as written by export_raster).
Eigen::MatrixXd read_text_raster(const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting of a double.
std::string format_double(double value);

}  // namespace lsl
