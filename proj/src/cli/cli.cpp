#include "cli.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "render.hpp"
#include "stratalloc/allocation.hpp"
#include "stratalloc/audit.hpp"
#include "stratalloc/errors.hpp"
#include "stratalloc/format.hpp"
#include "stratalloc/report.hpp"
#include "stratalloc/simulate.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitFailed = 3;

// Failure inside a single table row; the message carries the row identifier.
struct RowFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_population_flags(CLI::App& app, RunConfig& config) {
  app.add_option("--N", config.size, "population size");
  app.add_option("--w1", config.w1, "weight of stratum 1 (w1 * N must be an integer)");
  app.add_option("--N1", config.size1, "size of stratum 1, instead of --w1");
}

void add_budget_flags(CLI::App& app, RunConfig& config) {
  app.add_option("--c1", config.c1, "cost per unit sampled in stratum 1");
  app.add_option("--c2", config.c2, "cost per unit sampled in stratum 2");
  app.add_option("--budget", config.budget, "total sampling budget C");
}

void add_output_flags(CLI::App& app, RunConfig& config) {
  app.add_option("--format", config.format, "text|json|csv")->capture_default_str();
  app.add_option("--output", config.output, "write to this file instead of stdout");
  // Expanded before parsing; see expand_config.
  app.add_option("--config", "file of key=value lines (# comments); flags override it");
}

void add_mode_flag(CLI::App& app, RunConfig& config, const std::string& name) {
  app.add_option(name, config.mode, "parity|oracle")->capture_default_str();
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) throw InvalidInput("cannot open output file '" + config.output + "'");
  file << text;
  if (!file) throw InvalidInput("cannot write output file '" + config.output + "'");
}

// Optimal allocation in the caller's labelling.
Allocation optimal_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                              EvaluationMode mode) {
  const auto canon = canonicalize(population, budget);
  const auto allocation = optimize_allocation(canon.population, canon.budget, mode).allocation;
  return canon.swapped ? allocation.swapped() : allocation;
}

std::string cmd_allocate(const RunConfig& config) {
  const auto format = parse_format(config.format);
  const auto mode = parse_mode(config.mode);
  const auto population = make_population(config);
  const auto budget = make_budget(config, population);
  return render_allocation(build_report(population, budget, mode), format);
}

std::string cmd_table2(RunConfig config, const std::string& grid_spec) {
  const auto format = parse_format(config.format);
  const auto mode = parse_mode(config.mode);
  config.w1.reset();
  config.size1.reset();
  apply_reference_defaults(config);
  const auto grid = parse_grid(grid_spec);
  std::vector<StratifiedPopulation> populations;
  for (const double w1 : grid) populations.push_back(StratifiedPopulation::from_weight(*config.size, w1));
  const CostBudget budget{*config.c1, *config.c2, *config.budget};

  std::vector<AllocationReport> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      rows.push_back(build_report(populations[i], budget, mode));
    } catch (const std::exception& e) {
      throw RowFailure("row w1=" + format_number(grid[i]) + ": " + e.what());
    }
  }
  return render_table2(rows, format);
}

std::string cmd_table1(RunConfig config, const std::string& sizes, std::int64_t scan_limit) {
  const auto format = parse_format(config.format);
  apply_reference_defaults(config);
  AuditConfig audit;
  audit.switch_populations = parse_size_list(sizes);
  audit.table_budget = {*config.c1, *config.c2, *config.budget};
  audit.switch_scan_limit = scan_limit;
  return render_table1(audit_switch_weight(audit), format);
}

std::string cmd_curve(RunConfig config, std::optional<double> n1, bool optimize, double step) {
  const auto format = parse_format(config.format);
  const auto mode = parse_mode(config.mode);
  apply_reference_defaults(config);
  const auto population = make_population(config);
  const auto budget = make_budget(config, population);
  if (n1.has_value() == optimize) throw InvalidInput("give exactly one of --n1 or --optimize");
  if (!population.is_canonical()) throw InvalidInput("curve expects w1 <= 0.5; relabel the strata");
  const double size1 = n1 ? *n1 : static_cast<double>(optimize_allocation(population, budget, mode).allocation.n1);
  return render_curve(emit_curve(population, budget, size1, step, mode), format);
}

std::string cmd_audit(const RunConfig& config, const std::string& oracle_sizes, std::int64_t scan_limit) {
  const auto format = parse_format(config.format);
  AuditConfig audit;
  audit.mode = parse_mode(config.mode);
  audit.oracle_populations = parse_size_list(oracle_sizes);
  for (const auto n : audit.oracle_populations) {
    if (n > 200) throw InvalidInput("oracle sweep is limited to N <= 200");
  }
  audit.switch_scan_limit = scan_limit;
  return render_audit(run_audit(audit), format);
}

struct SimulateFlags {
  std::string mode = "known-thetas";
  std::string allocation_mode = "parity";
  std::optional<double> theta1;
  std::optional<double> theta2;
  std::optional<double> theta;
  std::optional<std::int64_t> n1;
  std::optional<std::int64_t> n2;
  std::int64_t replications = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

std::string cmd_simulate(RunConfig config, const SimulateFlags& flags) {
  const auto format = parse_format(config.format);
  apply_reference_defaults(config);
  const auto population = make_population(config);
  const auto budget = make_budget(config, population);

  SimulationConfig sim;
  sim.mode = parse_simulation_mode(flags.mode);
  sim.replications = flags.replications;
  sim.seed = flags.seed;
  sim.threads = flags.threads;
  if (sim.replications < 1) throw InvalidInput("--reps must be at least 1");

  auto require = [](const std::optional<double>& value, const char* name) {
    if (!value) throw InvalidInput(std::string(name) + " is required for this simulation mode");
    return *value;
  };
  auto allocation = [&] {
    if (flags.n1.has_value() != flags.n2.has_value()) throw InvalidInput("give both --n1 and --n2, or neither");
    if (flags.n1) return Allocation{*flags.n1, *flags.n2};
    return optimal_allocation(population, budget, parse_mode(flags.allocation_mode));
  };

  SimulationSummary summary;
  switch (sim.mode) {
    case SimulationMode::KnownThetas:
      summary = simulate_stratified(population, allocation(), require(flags.theta1, "--theta1"),
                                    require(flags.theta2, "--theta2"), sim);
      break;
    case SimulationMode::AveragedNuisance:
      summary = simulate_averaged(population, allocation(), lattice_index(population, require(flags.theta, "--theta")),
                                  sim);
      break;
    case SimulationMode::ClassicalSrs:
      summary = simulate_classical(population, budget, lattice_index(population, require(flags.theta, "--theta")), sim);
      break;
  }
  return render_simulation(summary, check_bands(summary), format);
}

// Splices the tokens of every `--config FILE` right after the subcommand
// name, so any flag given on the command line comes later and wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> from_files;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    const auto tokens = read_config_file(path);
    from_files.insert(from_files.end(), tokens.begin(), tokens.end());
  }
  if (rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_files.begin(), from_files.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimax two-stratum sample allocation under a cost budget", "stratalloc"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig config;

  auto* allocate = app.add_subcommand("allocate", "optimal allocation for one population");
  add_population_flags(*allocate, config);
  add_budget_flags(*allocate, config);
  add_mode_flag(*allocate, config, "--mode");
  add_output_flags(*allocate, config);

  std::string grid = "0.05:0.50:0.05";
  auto* table2 = app.add_subcommand("table2", "allocation table over a grid of stratum weights");
  table2->add_option("--N", config.size, "population size");
  add_budget_flags(*table2, config);
  table2->add_option("--grid", grid, "w1 grid as start:stop:step")->capture_default_str();
  add_mode_flag(*table2, config, "--mode");
  add_output_flags(*table2, config);

  std::string sizes = "100,1000,10000,100000,1000000,10000000";
  std::int64_t scan_limit = 10000000;
  auto* table1 = app.add_subcommand("table1", "switch weight w1* per population size");
  table1->add_option("--N-list", sizes, "comma-separated population sizes")->capture_default_str();
  add_budget_flags(*table1, config);
  table1->add_option("--scan-limit", scan_limit, "largest N for the regime-switch scan")->capture_default_str();
  add_output_flags(*table1, config);

  std::optional<double> curve_n1;
  bool optimize = false;
  double step = 0.001;
  auto* curve = app.add_subcommand("curve", "stratified and classical variance over theta");
  add_population_flags(*curve, config);
  add_budget_flags(*curve, config);
  curve->add_option("--n1", curve_n1, "stratum-1 sample size");
  curve->add_flag("--optimize", optimize, "use the optimal n1");
  curve->add_option("--step", step, "theta step")->capture_default_str();
  add_mode_flag(*curve, config, "--mode");
  add_output_flags(*curve, config);

  std::string oracle_sizes = "20,40";
  auto* audit = app.add_subcommand("audit", "check closed forms and reference tables");
  audit->add_option("--oracle-N", oracle_sizes, "population sizes for the exhaustive sweep (N <= 200)")
      ->capture_default_str();
  audit->add_option("--scan-limit", scan_limit, "largest N for the regime-switch scan")->capture_default_str();
  add_mode_flag(*audit, config, "--mode");
  add_output_flags(*audit, config);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the estimators");
  add_population_flags(*simulate, config);
  add_budget_flags(*simulate, config);
  simulate->add_option("--mode", sim.mode, "known-thetas|averaged-nuisance|classical-srs")->capture_default_str();
  add_mode_flag(*simulate, config, "--allocation-mode");
  simulate->add_option("--theta1", sim.theta1, "proportion in stratum 1");
  simulate->add_option("--theta2", sim.theta2, "proportion in stratum 2");
  simulate->add_option("--theta", sim.theta, "overall proportion (multiple of 1/N)");
  simulate->add_option("--n1", sim.n1, "stratum-1 sample size (default: optimal)");
  simulate->add_option("--n2", sim.n2, "stratum-2 sample size (default: optimal)");
  simulate->add_option("--reps", sim.replications, "replications")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str();
  add_output_flags(*simulate, config);

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  // CLI11 wants the arguments in reverse order.
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kExitInvalid;
  }

  try {
    std::string text;
    if (*allocate) {
      if (!config.size || !(config.w1 || config.size1) || !config.c1 || !config.c2 || !config.budget) {
        err << "error: allocate needs --N, --w1 (or --N1), --c1, --c2 and --budget\n" << allocate->help();
        return kExitInvalid;
      }
      text = cmd_allocate(config);
    } else if (*table2) {
      text = cmd_table2(config, grid);
    } else if (*table1) {
      text = cmd_table1(config, sizes, scan_limit);
    } else if (*curve) {
      if (config.format == "text") config.format = "csv";
      text = cmd_curve(config, curve_n1, optimize, step);
    } else if (*audit) {
      text = cmd_audit(config, oracle_sizes, scan_limit);
    } else if (*simulate) {
      text = cmd_simulate(config, sim);
    }
    emit(config, text, out);
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace stratalloc::cli
