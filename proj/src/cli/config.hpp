#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratalloc/population.hpp"

namespace stratalloc::cli {

enum class OutputFormat { Text, Json, Csv };

OutputFormat parse_format(std::string_view text);

/// Population, budget and output settings shared by all commands.
struct RunConfig {
  std::optional<std::int64_t> size;
  std::optional<std::int64_t> size1;
  std::optional<double> w1;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> budget;
  std::string mode = "parity";
  std::string format = "text";
  std::string output;
};

/// Fills unset population and budget fields with the reference design
/// (N = 30000, w1 = 0.25, c = (1, 3), C = 1200).
void apply_reference_defaults(RunConfig& config);

/// Requires N and exactly one of w1 or N1.
StratifiedPopulation make_population(const RunConfig& config);
/// Requires c1, c2 and budget. Census budgets and budgets below c1 + c2 are
/// rejected here, before any computation.
CostBudget make_budget(const RunConfig& config, const StratifiedPopulation& population);

/// Reads `key=value` lines (`#` starts a comment) into `--key value` tokens.
std::vector<std::string> read_config_file(const std::string& path);

/// `start:stop:step`, inclusive of stop; a lone value is a one-point grid.
std::vector<double> parse_grid(std::string_view spec);

/// Comma-separated positive integers; scientific notation such as 1e7 allowed.
std::vector<std::int64_t> parse_size_list(std::string_view text);

}  // namespace stratalloc::cli
