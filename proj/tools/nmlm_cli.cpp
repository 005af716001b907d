#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "nmlm/bench.hpp"

namespace {

struct Overrides {
  std::optional<int> levels;
  std::optional<std::string> strategy;
  std::optional<int> order;
  std::optional<int> cells;
  std::optional<double> tol;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--levels", o.levels, "number of order levels");
  app->add_option("--strategy", o.strategy, "order reduction: minus1, minus2, halve");
  app->add_option("--order", o.order, "top moment order M");
  app->add_option("--cells", o.cells, "number of grid cells N");
  app->add_option("--tol", o.tol, "residual tolerance");
}

nmlm::ScenarioConfig load(const std::string& config, const std::string& preset, const Overrides& o) {
  nmlm::ScenarioConfig c = config.empty() ? nmlm::preset(preset) : nmlm::load_config(config);
  if (o.levels) c.levels = *o.levels;
  if (o.strategy) {
    try {
      c.strategy = nmlm::parse_strategy(*o.strategy);
    } catch (const std::invalid_argument& e) {
      throw nmlm::ConfigError(e.what());
    }
  }
  if (o.order) c.order = *o.order;
  if (o.cells) c.cells = *o.cells;
  if (o.tol) c.tol = *o.tol;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady moment-model solver with multi-level order correction"};
  app.require_subcommand(1);

  std::string config, out = "out", preset = "couette";
  Overrides o;

  auto* run = app.add_subcommand("run", "solve one configuration");
  run->add_option("--config", config, "config file");
  run->add_option("--preset", preset, "preset used when no config is given");
  run->add_option("--out", out, "output directory");
  bool baseline = false;
  run->add_flag("--baseline", baseline, "also run the 1-level solver and report speedups");
  add_overrides(run, o);

  auto* matrix = app.add_subcommand("matrix", "sweep cells x orders x strategies x levels");
  std::vector<int> m_cells, m_orders, m_levels{2};
  std::vector<std::string> m_strategies{"minus1", "minus2", "halve"};
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  matrix->add_option("--config", config, "base config file");
  matrix->add_option("--preset", preset, "preset used when no config is given");
  matrix->add_option("--out", out, "output directory");
  matrix->add_option("--cells", m_cells, "cell counts")->expected(1, -1);
  matrix->add_option("--order", m_orders, "top orders")->expected(1, -1);
  matrix->add_option("--levels", m_levels, "level counts (1-level baseline always run)")->expected(1, -1);
  matrix->add_option("--strategy", m_strategies, "reduction strategies")->expected(1, -1);
  matrix->add_option("--tol", o.tol, "residual tolerance");
  matrix->add_option("--workers", workers, "parallel runs");

  app.add_subcommand("presets", "list shipped scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& name : nmlm::preset_names()) {
        const auto c = nmlm::preset(name);
        std::cout << name << ": Kn = " << c.collision.nu_law.kn << ", M = " << c.order << ", N = " << c.cells
                  << "\n";
      }
      return 0;
    }
    if (app.got_subcommand("run")) {
      auto c = load(config, preset, o);
      c.baseline = c.baseline || baseline;
      return nmlm::run_benchmark(c, out);
    }
    auto base = load(config, preset, Overrides{std::nullopt, std::nullopt, std::nullopt, std::nullopt, o.tol});
    nmlm::MatrixSpec spec;
    spec.cells = m_cells.empty() ? std::vector<int>{base.cells} : m_cells;
    spec.orders = m_orders.empty() ? std::vector<int>{base.order} : m_orders;
    spec.levels = m_levels;
    for (const auto& s : m_strategies) spec.strategies.push_back(nmlm::parse_strategy(s));
    spec.workers = workers;
    const auto rows = nmlm::run_matrix(base, spec, out);
    for (const auto& r : rows)
      if (r.status != "converged") return nmlm::kExitNotConverged;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nmlm::kExitError;
  }
}
