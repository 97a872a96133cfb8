#include "lsl/raster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

RasterFiles export_raster(const GridFunction& image, const std::filesystem::path& stem) {
  if (!image.values.allFinite()) throw ContractError("raster export needs finite values");
  const int width = image.grid.cells(0);
  const int height = image.grid.dimension() == 2 ? image.grid.cells(1) : 1;

  RasterFiles files{stem, stem, stem};
  files.text += ".txt";
  files.pgm += ".pgm";
  files.meta += ".meta";

  {
    auto out = open_for_write(files.text);
    for (int iy = 0; iy < height; ++iy) {
      for (int ix = 0; ix < width; ++ix) {
        if (ix) out << ' ';
        out << format_double(image.values[image.grid.index(ix, iy)]);
      }
      out << '\n';
    }
    if (!out) throw ConfigError("failed writing " + files.text.string());
  }

  const double lo = image.values.minCoeff();
  const double hi = image.values.maxCoeff();
  const double range = hi - lo;
  {
    auto out = open_for_write(files.pgm, std::ios::out | std::ios::binary);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    for (int iy = 0; iy < height; ++iy) {
      for (int ix = 0; ix < width; ++ix) {
        const double v = image.values[image.grid.index(ix, iy)];
        const long p = range > 0.0 ? std::lround(255.0 * (v - lo) / range) : 0;
        out.put(char(static_cast<unsigned char>(std::clamp(p, 0L, 255L))));
      }
    }
    if (!out) throw ConfigError("failed writing " + files.pgm.string());
  }
  {
    auto out = open_for_write(files.meta);
    out << "format = pgm-p5\n"
        << "width = " << width << '\n'
        << "height = " << height << '\n'
        << "min = " << format_double(lo) << '\n'
        << "max = " << format_double(hi) << '\n'
        << "normalization = round(255 * (value - min) / (max - min))\n"
        << "dynamic_range = " << (range > 0.0 ? "nonzero" : "zero (all pixels 0)") << '\n';
  }
  return files;
}

Eigen::MatrixXd read_text_raster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw ConfigError("malformed number in " + path.string());
      row.push_back(v);
      p = res.ptr;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ConfigError("ragged raster in " + path.string());
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(Eigen::Index(rows.size()), rows.empty() ? 0 : Eigen::Index(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
  }
  return m;
}

}  // namespace lsl
