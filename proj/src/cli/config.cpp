#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "stratalloc/errors.hpp"

namespace stratalloc::cli {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InvalidInput(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw InvalidInput("unknown output format '" + std::string(text) + "' (expected text|json|csv)");
}

void apply_reference_defaults(RunConfig& config) {
  if (!config.size) config.size = 30000;
  if (!config.w1 && !config.size1) config.w1 = 0.25;
  if (!config.c1) config.c1 = 1.0;
  if (!config.c2) config.c2 = 3.0;
  if (!config.budget) config.budget = 1200.0;
}

StratifiedPopulation make_population(const RunConfig& config) {
  if (!config.size) throw InvalidInput("--N is required");
  if (config.w1 && config.size1) throw InvalidInput("give either --w1 or --N1, not both");
  if (config.size1) return StratifiedPopulation::from_counts(*config.size, *config.size1);
  if (config.w1) return StratifiedPopulation::from_weight(*config.size, *config.w1);
  throw InvalidInput("--w1 or --N1 is required");
}

CostBudget make_budget(const RunConfig& config, const StratifiedPopulation& population) {
  if (!config.c1) throw InvalidInput("--c1 is required");
  if (!config.c2) throw InvalidInput("--c2 is required");
  if (!config.budget) throw InvalidInput("--budget is required");
  const CostBudget budget{*config.c1, *config.c2, *config.budget};
  const auto canon = canonicalize(population, budget);
  validate_budget(canon.population, canon.budget);
  return budget;
}

std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidInput("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(file, line)) {
    ++number;
    std::string_view view(line);
    view = trim(view.substr(0, view.find('#')));
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const auto key = trim(view.substr(0, eq));
    if (eq == std::string_view::npos || key.empty()) {
      throw InvalidInput(path + ":" + std::to_string(number) + ": expected key=value");
    }
    tokens.push_back("--" + std::string(key));
    tokens.emplace_back(trim(view.substr(eq + 1)));
  }
  return tokens;
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto colon = spec.find(':', begin);
    parts.push_back(trim(spec.substr(begin, colon - begin)));
    if (colon == std::string_view::npos) break;
    begin = colon + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], "grid")};
  if (parts.size() != 3) throw InvalidInput("grid must look like start:stop:step, got '" + std::string(spec) + "'");

  const double start = parse_double(parts[0], "grid start");
  const double stop = parse_double(parts[1], "grid stop");
  const double step = parse_double(parts[2], "grid step");
  if (!(step > 0.0)) throw InvalidInput("grid step must be positive");
  if (stop < start) throw InvalidInput("grid stop lies below start");

  // Tolerate the usual decimal representation error in (stop - start) / step.
  const double span = (stop - start) / step;
  const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
  if (count > 100000) throw InvalidInput("grid has too many points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    // Snap to 12 decimals so 0.05 + 2 * 0.05 prints and validates as 0.15.
    grid.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<std::int64_t> parse_size_list(std::string_view text) {
  std::vector<std::int64_t> sizes;
  std::size_t begin = 0;
  while (true) {
    const auto comma = text.find(',', begin);
    const auto item = trim(text.substr(begin, comma - begin));
    const double value = parse_double(item, "population list");
    if (value < 4 || value != std::floor(value) || value > 9.0e15) {
      throw InvalidInput("population sizes must be integers >= 4, got '" + std::string(item) + "'");
    }
    sizes.push_back(static_cast<std::int64_t>(value));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return sizes;
}

}  // namespace stratalloc::cli
