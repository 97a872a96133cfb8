#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "lsl/errors.hpp"
#include "lsl/raster.hpp"

using namespace lsl;
using namespace lsl::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lsl_raster_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("export_raster") {
  SUBCASE("2x2 example") {
    const Grid g = rectangle(2, 2, 2, 2);
    const GridFunction img(g, Eigen::Vector4d(0, 1, 2, 3));
    const RasterFiles files = export_raster(img, scratch("two"));
    CHECK(slurp(files.text) == "0 1\n2 3\n");
    const std::string pgm = slurp(files.pgm);
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(pgm.size() == header.size() + 4);
    CHECK(pgm.substr(0, header.size()) == header);
    CHECK(std::vector<unsigned char>(pgm.begin() + header.size(), pgm.end()) ==
          std::vector<unsigned char>{0, 85, 170, 255});
    const std::string meta = slurp(files.meta);
    CHECK(meta.find("min = 0\n") != std::string::npos);
    CHECK(meta.find("max = 3\n") != std::string::npos);
  }
  SUBCASE("constant image") {
    const Grid g = rectangle(3, 1, 3, 2);
    GridFunction img(g);
    img.values.setConstant(4.25);
    const RasterFiles files = export_raster(img, scratch("flat"));
    const std::string pgm = slurp(files.pgm);
    CHECK(std::all_of(pgm.end() - 6, pgm.end(), [](char c) { return c == 0; }));
    CHECK(slurp(files.meta).find("dynamic_range = zero") != std::string::npos);
  }
  SUBCASE("full-precision round trip") {
    const Grid g = rectangle(7, 5, 7, 5);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    GridFunction img(g);
    for (auto& v : img.values) v = normal(rng) * std::pow(10.0, int(normal(rng) * 40));
    img.values[0] = 0.1;
    img.values[1] = -0.0;
    img.values[2] = 5e-324;
    img.values[3] = 1.7976931348623157e308;
    const RasterFiles files = export_raster(img, scratch("round"));
    const Eigen::MatrixXd back = read_text_raster(files.text);
    REQUIRE(back.rows() == 5);
    REQUIRE(back.cols() == 7);
    for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(back(i / 7, i % 7) == img.values[i]);
  }
  SUBCASE("text is locale independent") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-20) == "1e-20");
  }
  SUBCASE("errors") {
    GridFunction img(rectangle(2, 2, 2, 2));
    img.values[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(export_raster(img, scratch("bad")), ContractError);
    CHECK_THROWS_AS(export_raster(GridFunction(rectangle(2, 2, 2, 2)), "/nonexistent-dir/x/img"), ConfigError);
  }
}
