#include "lsl/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "lsl/errors.hpp"
#include "lsl/pulse.hpp"

namespace lsl {
namespace {

// Reads typed values out of a TOML table while recording every problem and
// every key it touched, so leftovers can be reported as unknown.
class TableReader {
 public:
  TableReader(const toml::table* table, std::string prefix, std::vector<std::string>& diagnostics)
      : table_(table), prefix_(std::move(prefix)), diag_(diagnostics) {}

  bool present() const { return table_ != nullptr; }

  template <typename T>
  std::optional<T> scalar(std::string_view key) {
    const toml::node* node = find(key);
    if (!node) return std::nullopt;
    if constexpr (std::is_same_v<T, double>) {
      if (auto v = node->value<double>()) return *v;  // integers convert too
    } else if constexpr (std::is_same_v<T, bool>) {
      if (auto v = node->as_boolean()) return v->get();
    } else if constexpr (std::is_integral_v<T>) {
      if (auto v = node->as_integer()) return T(v->get());
    } else {
      if (auto v = node->as_string()) return T(v->get());
    }
    error(key, "has the wrong type");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(std::string_view key) {
    const toml::node* node = find(key);
    if (!node) return std::nullopt;
    const auto* arr = node->as_array();
    if (!arr) {
      error(key, "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& e : *arr) {
      auto v = e.value<double>();
      if (!v) {
        error(key, "must be an array of numbers");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<int>> integers(std::string_view key) {
    const toml::node* node = find(key);
    if (!node) return std::nullopt;
    const auto* arr = node->as_array();
    std::vector<int> out;
    if (arr) {
      for (const auto& e : *arr) {
        if (!e.is_integer()) {
          arr = nullptr;
          break;
        }
        out.push_back(int(e.as_integer()->get()));
      }
    }
    if (!arr) {
      error(key, "must be an array of integers");
      return std::nullopt;
    }
    return out;
  }

  const toml::node* raw(std::string_view key) { return find(key); }

  void finish() {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!seen_.count(std::string(k.str()))) diag_.push_back("unknown key '" + qualified(k.str()) + "'");
    }
  }

  void error(std::string_view key, const std::string& what) { diag_.push_back("'" + qualified(key) + "' " + what); }

 private:
  const toml::node* find(std::string_view key) {
    seen_.insert(std::string(key));
    return table_ ? table_->get(key) : nullptr;
  }
  std::string qualified(std::string_view key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
  }

  const toml::table* table_;
  std::string prefix_;
  std::vector<std::string>& diag_;
  std::set<std::string> seen_;
};

std::optional<Box> read_box(TableReader& r, const std::string& lower_key, const std::string& upper_key) {
  auto lo = r.numbers(lower_key);
  auto hi = r.numbers(upper_key);
  if (!lo && !hi) return std::nullopt;
  if (!lo || !hi || lo->empty() || lo->size() > 2 || lo->size() != hi->size()) {
    r.error(lower_key, "and '" + upper_key + "' must be given together with 1 or 2 coordinates each");
    return std::nullopt;
  }
  Box b;
  for (std::size_t a = 0; a < lo->size(); ++a) {
    b.lower[a] = (*lo)[a];
    b.upper[a] = (*hi)[a];
  }
  return b;
}

std::array<double, 2> to_point(const std::vector<double>& v) {
  return {v.empty() ? 0.0 : v[0], v.size() > 1 ? v[1] : 0.0};
}

constexpr Eigen::Index kMaxDenseCells = 4096;

}  // namespace

Grid ExperimentConfig::grid() const { return build_grid(extents, cells); }

Grid ExperimentConfig::image_grid() const { return build_grid(extents, image_cells.empty() ? cells : image_cells); }

double ExperimentConfig::time_step() const {
  return tau ? *tau : default_time_step(PulseSpec{sigma, omega0, 0});
}

ExperimentConfig parse_config(std::string_view text, const std::string& source_name) {
  toml::table doc;
  try {
    doc = toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source_name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ConfigError(std::vector<std::string>{os.str()});
  }

  std::vector<std::string> diag;
  ExperimentConfig c;
  TableReader top(&doc, "", diag);

  if (auto v = top.scalar<int>("schema_version")) c.schema_version = *v;
  else diag.push_back("missing 'schema_version'");
  if (auto v = top.scalar<std::string>("scenario")) c.scenario = *v;

  auto section = [&](std::string_view name) {
    const toml::node* n = top.raw(name);
    if (n && !n->is_table()) diag.push_back("'" + std::string(name) + "' must be a table");
    return TableReader(n ? n->as_table() : nullptr, std::string(name), diag);
  };

  auto grid = section("grid");
  if (auto v = grid.numbers("extents")) c.extents = *v;
  else diag.push_back("missing 'grid.extents'");
  if (auto v = grid.integers("cells")) c.cells = *v;
  else diag.push_back("missing 'grid.cells'");
  if (auto v = grid.integers("image_cells")) c.image_cells = *v;
  grid.finish();

  auto pulse = section("pulse");
  if (auto v = pulse.scalar<double>("sigma")) c.sigma = *v;
  else diag.push_back("missing 'pulse.sigma'");
  if (auto v = pulse.scalar<double>("omega0")) c.omega0 = *v;
  if (auto v = pulse.scalar<double>("tau")) c.tau = *v;
  if (auto v = pulse.scalar<int>("steps")) c.steps = *v;
  else diag.push_back("missing 'pulse.steps'");
  pulse.finish();

  auto sources = section("sources");
  if (const toml::node* list = sources.raw("cells")) {
    const auto* arr = list->as_array();
    if (!arr) sources.error("cells", "must be an array");
    for (std::size_t i = 0; arr && i < arr->size(); ++i) {
      const toml::node& e = *arr->get(i);
      if (e.is_integer()) {
        c.sources.push_back({int(e.as_integer()->get()), 0});
      } else if (const auto* pair = e.as_array(); pair && !pair->empty() && pair->size() <= 2 &&
                                                   pair->is_homogeneous(toml::node_type::integer)) {
        c.sources.push_back({int(pair->get(0)->as_integer()->get()),
                             pair->size() > 1 ? int(pair->get(1)->as_integer()->get()) : 0});
      } else {
        sources.error("cells", "entry " + std::to_string(i) + " must be an integer or [ix, iy]");
      }
    }
  }
  if (auto v = sources.scalar<int>("top_count")) {
    if (*v < 1) {
      sources.error("top_count", "must be positive");
    } else if (c.cells.empty() || c.cells[0] < 1) {
      sources.error("top_count", "needs grid.cells");
    } else {
      for (int j = 0; j < *v; ++j) c.sources.push_back({int((j + 0.5) * c.cells[0] / *v), 0});
    }
  }
  sources.finish();

  if (const toml::node* medium = top.raw("medium")) {
    const auto* arr = medium->as_array();
    if (!arr) diag.push_back("'medium' must be an array of tables ([[medium]])");
    for (std::size_t i = 0; arr && i < arr->size(); ++i) {
      const auto* t = arr->get(i)->as_table();
      TableReader r(t, "medium[" + std::to_string(i) + "]", diag);
      if (!t) {
        diag.push_back("'medium[" + std::to_string(i) + "]' must be a table");
        continue;
      }
      Inclusion inc;
      const std::string shape = r.scalar<std::string>("shape").value_or("rectangle");
      if (auto v = r.scalar<double>("amplitude")) inc.amplitude = *v;
      else r.error("amplitude", "is required");
      if (shape == "rectangle") {
        inc.shape = Inclusion::Shape::rectangle;
        if (auto b = read_box(r, "lower", "upper")) inc.box = *b;
        else r.error("lower", "and 'upper' are required for a rectangle");
      } else if (shape == "bump") {
        inc.shape = Inclusion::Shape::bump;
        if (auto v = r.numbers("center"); v && !v->empty() && v->size() <= 2) inc.center = to_point(*v);
        else r.error("center", "is required for a bump (1 or 2 coordinates)");
        if (auto v = r.scalar<double>("radius")) inc.radius = *v;
        else r.error("radius", "is required for a bump");
      } else {
        r.error("shape", "must be 'rectangle' or 'bump'");
      }
      r.finish();
      c.medium.push_back(inc);
    }
  }

  auto inv = section("inversion");
  if (auto v = inv.raw("modes")) {
    const auto* arr = v->as_array();
    for (std::size_t i = 0; arr && i < arr->size(); ++i) {
      auto s = arr->get(i)->value<std::string>();
      try {
        if (!s) throw ConfigError("mode entries must be strings");
        c.modes.push_back(parse_mode(*s));
      } catch (const ConfigError& e) {
        inv.error("modes", e.what());
      }
    }
    if (!arr) inv.error("modes", "must be an array of strings");
  } else {
    c.modes = {ImagingMode::born, ImagingMode::lsl};
  }
  if (auto v = inv.scalar<double>("lambda")) c.lambda = *v;
  if (auto v = inv.scalar<bool>("nonnegative")) c.nonnegative = *v;
  if (auto v = inv.scalar<double>("repair_tolerance")) c.repair_tolerance = *v;
  inv.finish();

  auto prop = section("propagator");
  if (auto v = prop.scalar<std::string>("kind")) {
    if (*v == "spectral") c.propagator = PropagatorKind::spectral;
    else if (*v == "leapfrog") c.propagator = PropagatorKind::leapfrog;
    else prop.error("kind", "must be 'spectral' or 'leapfrog'");
  }
  if (auto v = prop.scalar<int>("substeps")) c.substeps = *v;
  if (auto v = prop.scalar<double>("cfl")) c.cfl_number = *v;
  prop.finish();

  auto noise = section("noise");
  if (auto v = noise.scalar<double>("level")) c.noise_level = *v;
  if (auto v = noise.scalar<std::int64_t>("seed")) c.seed = std::uint64_t(*v);
  noise.finish();

  auto metrics = section("metrics");
  c.shadow = read_box(metrics, "shadow_lower", "shadow_upper");
  c.support = read_box(metrics, "support_lower", "support_upper");
  if (auto v = metrics.scalar<bool>("internal_errors")) c.internal_errors = *v;
  if (auto v = metrics.scalar<int>("radial_bins")) c.radial_bins = *v;
  metrics.finish();

  auto output = section("output");
  if (auto v = output.scalar<std::string>("directory")) c.output_dir = *v;
  output.finish();

  top.finish();

  auto semantic = validate(c);
  diag.insert(diag.end(), semantic.begin(), semantic.end());
  if (!diag.empty()) throw ConfigError(std::move(diag));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::vector<std::string>{"cannot open config file " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> d;
  if (c.schema_version != kConfigSchemaVersion) {
    d.push_back("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                std::to_string(kConfigSchemaVersion) + ")");
  }
  std::optional<Grid> grid;
  try {
    grid = c.grid();
  } catch (const ConfigError& e) {
    d.push_back(e.what());
  }
  if (grid) {
    if (!c.image_cells.empty()) {
      if (c.image_cells.size() != c.cells.size()) {
        d.push_back("grid.image_cells must have one entry per axis");
      } else {
        for (std::size_t a = 0; a < c.cells.size(); ++a) {
          if (c.image_cells[a] < 1 || c.cells[a] % c.image_cells[a] != 0) {
            d.push_back("grid.image_cells[" + std::to_string(a) + "] must divide grid.cells");
          }
        }
      }
    }
    if (c.sources.empty()) d.push_back("no sources configured");
    for (std::size_t j = 0; j < c.sources.size(); ++j) {
      if (!grid->contains(c.sources[j])) d.push_back("source " + std::to_string(j) + " lies outside the grid");
    }
    for (std::size_t i = 0; i < c.medium.size(); ++i) {
      const auto& inc = c.medium[i];
      const std::string name = "medium[" + std::to_string(i) + "]";
      if (!std::isfinite(inc.amplitude)) d.push_back(name + ".amplitude must be finite");
      if (inc.shape == Inclusion::Shape::rectangle) {
        for (int a = 0; a < grid->dimension(); ++a) {
          if (!(inc.box.lower[a] < inc.box.upper[a])) d.push_back(name + " has an empty extent on axis " + std::to_string(a));
        }
      } else if (!(inc.radius > 0.0)) {
        d.push_back(name + ".radius must be positive");
      }
    }
    auto check_region = [&](const std::optional<Box>& box, const std::string& name) {
      if (!box) return;
      for (int a = 0; a < grid->dimension(); ++a) {
        if (box->lower[a] > box->upper[a] || box->lower[a] < 0.0 || box->upper[a] > grid->extent(a)) {
          d.push_back("metrics." + name + " region is empty or outside the grid");
          return;
        }
      }
    };
    if (c.propagator == PropagatorKind::spectral && !c.medium.empty() && grid->size() > kMaxDenseCells) {
      d.push_back("propagator.kind = 'spectral' needs a dense eigendecomposition; use 'leapfrog' above " +
                  std::to_string(kMaxDenseCells) + " cells");
    }
    check_region(c.shadow, "shadow");
    check_region(c.support, "support");
  }
  if (!(c.sigma > 0.0)) d.push_back("pulse.sigma must be positive");
  if (!(c.omega0 >= 0.0)) d.push_back("pulse.omega0 must be non-negative");
  if (c.tau && !(*c.tau > 0.0)) d.push_back("pulse.tau must be positive");
  if (c.steps < 2) d.push_back("pulse.steps (mass-matrix order n) must be at least 2");
  if (c.modes.empty()) d.push_back("inversion.modes must not be empty");
  if (!(c.lambda >= 0.0)) d.push_back("inversion.lambda must be non-negative");
  if (!(c.repair_tolerance >= 0.0 && c.repair_tolerance < 1.0)) d.push_back("inversion.repair_tolerance must lie in [0, 1)");
  if (c.substeps && *c.substeps < 1) d.push_back("propagator.substeps must be at least 1");
  if (!(c.cfl_number > 0.0 && c.cfl_number < 1.0)) d.push_back("propagator.cfl must lie in (0, 1)");
  if (!(c.noise_level >= 0.0)) d.push_back("noise.level must be non-negative");
  if (c.radial_bins < 0) d.push_back("metrics.radial_bins must be non-negative");
  return d;
}

GridFunction true_potential(const ExperimentConfig& config) {
  const Grid g = config.grid();
  GridFunction q(g);
  for (const auto& inc : config.medium) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto x = g.center(i);
      if (inc.shape == Inclusion::Shape::rectangle) {
        if (inc.box.contains(x, g.dimension())) q.values[i] += inc.amplitude;
      } else {
        const double r = std::hypot(x[0] - inc.center[0], g.dimension() == 2 ? x[1] - inc.center[1] : 0.0);
        if (r < inc.radius) {
          const double c = std::cos(0.5 * std::numbers::pi * r / inc.radius);
          q.values[i] += inc.amplitude * c * c;
        }
      }
    }
  }
  return q;
}

}  // namespace lsl
