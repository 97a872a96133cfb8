// Command-line runner for monostatic imaging experiments.
//
//   lsl run <config> [--out DIR] [--modes born,lsl,cheated] [--seed N]
//   lsl validate <config>
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "lsl/errors.hpp"
#include "lsl/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_diagnostics(const lsl::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& d : e.diagnostics()) std::cerr << "  - " << d << "\n";
}

std::filesystem::path output_directory(const lsl::ExperimentConfig& config, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(lsl::kOutputDirEnv); env && *env) return env;
  return config.output_dir;
}

void print_summary(const lsl::ExperimentResult& result, const std::filesystem::path& dir) {
  std::cout << "scenario " << result.metrics.scenario << "\n";
  for (const auto& [mode, m] : result.metrics.modes) {
    std::cout << std::left << std::setw(8) << lsl::to_string(mode) << std::setprecision(4) << " misfit "
              << m.misfit << "  error " << m.image_error << "  ncc " << m.correlation;
    if (m.ghost_ratio) std::cout << "  ghost " << *m.ghost_ratio;
    if (m.degenerate) std::cout << "  (no scattered data)";
    std::cout << "\n";
  }
  std::cout << "outputs written to " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lippmann-Schwinger-Lanczos imaging of monostatic data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> modes;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Simulate data, invert, and write images and metrics");
  run->add_option("config", config_path, "TOML experiment file")->required();
  run->add_option("--out", out_dir, std::string("Output directory (overrides ") + lsl::kOutputDirEnv + ")");
  run->add_option("--modes", modes, "Imaging modes: born, lsl, cheated")->delimiter(',');
  run->add_option("--seed", seed, "Noise seed");

  auto* validate = app.add_subcommand("validate", "Check a config file and report every problem");
  validate->add_option("config", config_path, "TOML experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    lsl::ExperimentConfig config = lsl::load_config(config_path);
    if (*validate) {
      std::cout << config_path << ": ok\n";
      return 0;
    }
    if (!modes.empty()) {
      config.modes.clear();
      for (const auto& m : modes) config.modes.push_back(lsl::parse_mode(m));
    }
    if (seed) config.seed = *seed;
    const auto dir = output_directory(config, out_dir);
    const lsl::ExperimentResult result = lsl::run_experiment(config);
    lsl::write_outputs(result, dir);
    print_summary(result, dir);
    return 0;
  } catch (const lsl::ConfigError& e) {
    print_diagnostics(e);
    return kExitConfig;
  } catch (const lsl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
