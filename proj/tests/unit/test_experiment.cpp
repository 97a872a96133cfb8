#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "lsl/errors.hpp"

using namespace lsl;
using namespace lsl::testing;

namespace {

ExperimentConfig small_config() {
  return parse_config(R"(
schema_version = 1
scenario = "small"
[grid]
extents = [1.0]
cells = [90]
image_cells = [30]
[pulse]
sigma = 25.0
omega0 = 15.0
steps = 12
[sources]
cells = [0, 89]
[[medium]]
lower = [0.4]
upper = [0.5]
amplitude = 800.0
[inversion]
modes = ["born", "lsl", "cheated"]
[metrics]
internal_errors = true
)");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty medium is degenerate") {
  ExperimentConfig c = small_config();
  c.medium.clear();
  c.modes = {ImagingMode::born, ImagingMode::lsl};
  const ExperimentResult r = run_experiment(c);
  for (const auto& [mode, img] : r.images) CHECK(img.values.values.isZero(0.0));
  for (const auto& [mode, m] : r.metrics.modes) {
    CHECK(m.degenerate);
    CHECK(m.misfit == 0.0);
  }
}

TEST_CASE("run_experiment") {
  const ExperimentConfig c = small_config();
  const ExperimentResult r = run_experiment(c);

  SUBCASE("one image and system per mode") {
    CHECK(r.images.size() == 3);
    CHECK(r.systems.at(ImagingMode::lsl).rows() == 2 * 12);
    CHECK(r.truth.grid == c.image_grid());
    CHECK(r.measured.size() == 2);
    CHECK(r.measured[1].source == 1);
    CHECK(r.measured[1].length() == 2 * 12 - 1);
  }
  SUBCASE("per-step internal errors and late-time ordering") {
    for (const auto& s : r.metrics.sources) {
      REQUIRE(s.internal_error.size() == 12);
      CHECK(s.internal_error[0] < 1e-10);
      CHECK(s.internal_error.back() < s.background_error.back());
    }
  }
  SUBCASE("metrics are finite") {
    for (const auto& [mode, m] : r.metrics.modes) {
      CHECK(std::isfinite(m.misfit));
      CHECK(m.misfit >= 0.0);
      CHECK(std::isfinite(m.image_error));
      CHECK_FALSE(m.degenerate);
    }
  }
  SUBCASE("deterministic in memory") {
    const ExperimentResult again = run_experiment(c);
    for (const auto& [mode, img] : r.images) CHECK(img.values.values == again.images.at(mode).values.values);
  }
  SUBCASE("metrics json") {
    const auto j = nlohmann::json::parse(metrics_json(r.metrics));
    CHECK(j["scenario"] == "small");
    CHECK(j["modes"].contains("lsl"));
    CHECK(j["modes"]["born"]["ghost_ratio"].is_null());
    CHECK(j["sources"].size() == 2);
    CHECK(j["sources"][0]["internal_error"].size() == 12);
  }
  SUBCASE("written outputs") {
    const auto dir = std::filesystem::temp_directory_path() / "lsl_experiment_outputs";
    std::filesystem::remove_all(dir);
    write_outputs(r, dir);
    for (const char* f : {"image_born.txt", "image_lsl.pgm", "image_cheated.meta", "metrics.json",
                          "transfer_j0.txt", "transfer_j1.txt"}) {
      CHECK(std::filesystem::exists(dir / f));
    }
    std::istringstream transfer(slurp(dir / "transfer_j1.txt"));
    std::string header;
    std::getline(transfer, header);
    CHECK(header == "# k t F F0");
    int k = 0;
    double t = 0, f = 0, f0 = 0;
    transfer >> k >> t >> f >> f0;
    CHECK(k == 0);
    CHECK(f == r.measured[1].samples[0]);
    CHECK(f0 == r.background[1].samples[0]);
  }
}

TEST_CASE("noise") {
  ExperimentConfig c = small_config();
  c.noise_level = 1e-7;
  c.repair_tolerance = 1e-8;
  c.seed = 42;
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  CHECK(a.measured[0].samples == b.measured[0].samples);
  c.seed = 43;
  const ExperimentResult other = run_experiment(c);
  CHECK(a.measured[0].samples != other.measured[0].samples);
  CHECK(a.background[0].samples == other.background[0].samples);
}

TEST_CASE("invalid config is refused") {
  ExperimentConfig c = small_config();
  c.steps = 1;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("leapfrog CFL violation propagates") {
  ExperimentConfig c = small_config();
  c.propagator = PropagatorKind::leapfrog;
  c.substeps = 1;
  CHECK_THROWS_AS(run_experiment(c), NumericalError);
}

TEST_CASE("MonostaticData") {
  MonostaticData data;
  TransferSeries s;
  s.source = s.receiver = 3;
  s.samples = Eigen::VectorXd::Ones(3);
  data.add(s);
  CHECK(data.response(3, 3).samples.size() == 3);
  CHECK_THROWS_AS(data.response(3, 1), ContractError);
  CHECK_THROWS_AS(data.response(2, 2), ContractError);
  TransferSeries cross = s;
  cross.receiver = 0;
  CHECK_THROWS_AS(data.add(cross), ContractError);
  CHECK_THROWS_AS(data.add(s), ContractError);
  CHECK(data.diagonal().size() == 1);
}
