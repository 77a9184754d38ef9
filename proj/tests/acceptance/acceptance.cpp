// Acceptance gate: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the named ones. Exit status is 0 only when
// every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "random_configs.hpp"
#include "render.hpp"
#include "stratalloc/allocation.hpp"
#include "stratalloc/audit.hpp"
#include "stratalloc/format.hpp"
#include "stratalloc/reference_values.hpp"
#include "stratalloc/report.hpp"
#include "stratalloc/simulate.hpp"
#include "stratalloc/variance.hpp"

using namespace stratalloc;

namespace {

// Tolerances and limits, pinned.
constexpr double kParityVarianceTol = 1e-9;
constexpr double kParityReductionTol = 0.0005;
constexpr double kParitySeconds = 1.0;

constexpr std::int64_t kTableN1Slack = 1;
constexpr double kTableVarianceTol = 1.5e-6;
constexpr double kTableReductionTol = 0.2;
constexpr double kTableSeconds = 10.0;

constexpr double kEnumerationTol = 1e-12;
constexpr double kClosedFormTol = 1e-9;
constexpr double kOracleSeconds = 60.0;

constexpr std::size_t kRandomConfigs = 50;
constexpr std::uint64_t kRandomSeed = 20240601;
constexpr double kOptimizerSeconds = 60.0;

constexpr double kRootResidualTol = 1e-9;

constexpr std::int64_t kReplications = 100000;
constexpr std::uint64_t kSeed = 42;
constexpr double kMonteCarloSeconds = 30.0;

constexpr double kContinuityTol = 1e-9;
constexpr double kRelabelTol = 1e-12;

const CostBudget kBudget{1, 3, 1200};

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 6) { return format_number(v, digits); }

void require(Outcome& o, bool condition, const std::string& failure) {
  if (!condition) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + failure;
  }
}

void note(Outcome& o, const std::string& text) { o.detail += (o.detail.empty() ? "" : "; ") + text; }

void check_runtime(Outcome& o, const Timer& t, double limit) {
  const double s = t.seconds();
  require(o, s < limit, "runtime " + fmt(s, 3) + " s exceeds " + fmt(limit) + " s");
  if (s < limit) note(o, "runtime " + fmt(s, 3) + " s");
}

Outcome reference_run() {
  Outcome o;
  const Timer timer;
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({"allocate", "--N", "30000", "--w1", "0.25", "--c1", "1", "--c2", "3", "--budget", "1200",
                             "--format", "json"},
                            out, err);
  const double seconds = timer.seconds();
  require(o, code == 0, "allocate exited with " + std::to_string(code) + ": " + err.str());
  if (code != 0) return o;
  const auto j = nlohmann::json::parse(out.str());
  const auto r = build_report(StratifiedPopulation::from_weight(30000, 0.25), kBudget, EvaluationMode::Parity);

  require(o, j["n1_opt"] == 165, "n1_opt " + j["n1_opt"].dump());
  require(o, j["n2_opt"] == 345, "n2_opt " + j["n2_opt"].dump());
  require(o, j["n_c"] == 480, "n_c " + j["n_c"].dump());
  for (const double v : {j["max_var_stratified"].get<double>(), r.max_var_stratified}) {
    require(o, std::fabs(v - 0.000448249) <= kParityVarianceTol, "max_var_stratified " + fmt(v, 12));
  }
  for (const double v : {j["max_var_classical"].get<double>(), r.max_var_classical}) {
    require(o, std::fabs(v - 0.000512517) <= kParityVarianceTol, "max_var_classical " + fmt(v, 12));
  }
  for (const double v : {j["reduction_percent"].get<double>(), r.reduction_percent}) {
    require(o, std::fabs(v - 12.5397) <= kParityReductionTol, "reduction " + fmt(v, 10));
  }
  require(o, seconds < kParitySeconds, "runtime " + fmt(seconds, 3) + " s");
  note(o, "n1=" + j["n1_opt"].dump() + " n2=" + j["n2_opt"].dump() + " n_c=" + j["n_c"].dump() +
              " var=" + fmt(r.max_var_stratified, 9) + " classical=" + fmt(r.max_var_classical, 9) +
              " reduction=" + fmt(r.reduction_percent, 8) + "% in " + fmt(seconds, 3) + " s");
  return o;
}

Outcome table2() {
  Outcome o;
  const Timer timer;
  int matching = 0;
  for (const auto& ref : reference::kAllocationTable) {
    const auto r = build_report(StratifiedPopulation::from_weight(reference::kTablePopulation, ref.w1), kBudget,
                                EvaluationMode::Parity);
    std::string row_failure;
    auto cell = [&](bool ok, const std::string& what) {
      if (!ok) row_failure += (row_failure.empty() ? "" : ", ") + what;
    };
    cell(std::llabs(r.n1_opt - ref.n1_opt) <= kTableN1Slack,
         "n1_opt " + std::to_string(r.n1_opt) + " vs " + std::to_string(ref.n1_opt));
    cell(r.n_w == ref.n_w, "n_w " + std::to_string(r.n_w) + " vs " + std::to_string(ref.n_w));
    cell(r.n_c == ref.n_c, "n_c " + std::to_string(r.n_c) + " vs " + std::to_string(ref.n_c));
    cell(std::fabs(r.max_var_stratified - ref.max_var_stratified) <= kTableVarianceTol,
         "stratified " + fmt(r.max_var_stratified) + " vs " + fmt(ref.max_var_stratified));
    cell(std::fabs(r.max_var_classical - ref.max_var_classical) <= kTableVarianceTol,
         "classical " + fmt(r.max_var_classical) + " vs " + fmt(ref.max_var_classical));
    cell(std::fabs(r.reduction_percent - ref.reduction_percent) <= kTableReductionTol,
         "reduction " + fmt(r.reduction_percent) + " vs " + fmt(ref.reduction_percent));
    if (row_failure.empty()) {
      ++matching;
    } else {
      require(o, false, "w1=" + fmt(ref.w1) + ": " + row_failure);
    }
  }
  note(o, std::to_string(matching) + "/10 rows match");

  AuditConfig config;
  const auto audit = audit_table(config);
  std::vector<std::string> flagged_rows;
  bool quarter_flagged = false;
  for (const auto& row : audit) {
    bool any = false;
    for (const auto& c : row.cells) {
      any = any || c.flagged;
      if (std::fabs(row.w1 - 0.25) < 1e-12 && c.flagged &&
          (c.column == "max_var_stratified" || c.column == "max_var_classical")) {
        quarter_flagged = true;
      }
    }
    if (any) flagged_rows.push_back(fmt(row.w1));
  }
  require(o, quarter_flagged, "audit does not flag the w1=0.25 variance cells");
  std::string rows;
  for (const auto& w : flagged_rows) rows += (rows.empty() ? "" : ",") + w;
  note(o, "audit flags rows {" + rows + "}");
  check_runtime(o, timer, kTableSeconds);
  return o;
}

// Relative deviation; a zero reference must be matched exactly.
double relative(double reference, double value) {
  if (reference == 0.0) return value == 0.0 ? 0.0 : INFINITY;
  return std::fabs(value - reference) / std::fabs(reference);
}

Outcome oracle_equivalence() {
  Outcome o;
  const Timer timer;
  const oracle::Pascal binom(60);
  std::int64_t known_cases = 0;
  std::int64_t averaged_cases = 0;
  double worst_known = 0.0;
  double worst_averaged = 0.0;

  for (const std::int64_t big_n : {20, 40, 60}) {
    // Enumerated stratum variances, var[stratum size][successes][draws].
    std::vector<std::vector<std::vector<long double>>> var(static_cast<std::size_t>(big_n) + 1);
    for (std::int64_t size = 2; size <= big_n; ++size) {
      auto& table = var[static_cast<std::size_t>(size)];
      table.assign(static_cast<std::size_t>(size) + 1, std::vector<long double>(static_cast<std::size_t>(size) + 1));
      for (std::int64_t k = 0; k <= size; ++k) {
        for (std::int64_t n = 1; n <= size; ++n) {
          table[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)] =
              oracle::enumerate_count(binom, size, k, n).variance;
        }
      }
    }

    for (std::int64_t big1 = 4; big1 <= big_n / 2; ++big1) {
      const auto pop = StratifiedPopulation::from_counts(big_n, big1);
      const std::int64_t big2 = big_n - big1;
      const long double w1 = static_cast<long double>(big1) / static_cast<long double>(big_n);
      const long double w2 = 1.0L - w1;
      for (std::int64_t n1 = 1; n1 <= big1; ++n1) {
        for (std::int64_t n2 = 1; n2 <= big2; ++n2) {
          const SampleSizes sizes{static_cast<double>(n1), static_cast<double>(n2)};
          for (std::int64_t m = 0; m <= big_n; ++m) {
            long double sum = 0.0L;
            std::int64_t count = 0;
            for (std::int64_t m1 = std::max<std::int64_t>(0, m - big2); m1 <= std::min(big1, m); ++m1) {
              const std::int64_t m2 = m - m1;
              const long double enumerated =
                  w1 * w1 * var[static_cast<std::size_t>(big1)][static_cast<std::size_t>(m1)][static_cast<std::size_t>(n1)] /
                      (static_cast<long double>(n1) * n1) +
                  w2 * w2 * var[static_cast<std::size_t>(big2)][static_cast<std::size_t>(m2)][static_cast<std::size_t>(n2)] /
                      (static_cast<long double>(n2) * n2);
              const double formula = variance_known_thetas(pop, sizes, static_cast<double>(m1) / static_cast<double>(big1),
                                                           static_cast<double>(m2) / static_cast<double>(big2));
              const auto e = static_cast<double>(enumerated);
              worst_known = std::max(worst_known, relative(e, formula));
              sum += enumerated;
              ++count;
              ++known_cases;
            }
            const auto average = static_cast<double>(sum / static_cast<long double>(count));
            const double exact = averaged_variance_exact(pop, {n1, n2}, m);
            worst_averaged = std::max(worst_averaged, relative(average, exact));
            ++averaged_cases;
          }
        }
      }
    }
  }
  require(o, worst_known <= kEnumerationTol, "known-theta formula deviates by " + fmt(worst_known, 3));
  require(o, worst_averaged <= kEnumerationTol, "nuisance-set summation deviates by " + fmt(worst_averaged, 3));
  note(o, std::to_string(known_cases) + " known-theta cases, max rel " + fmt(worst_known, 3));
  note(o, std::to_string(averaged_cases) + " averaged cases, max rel " + fmt(worst_averaged, 3));

  const auto closed = audit_oracle({20, 40, 60}, kClosedFormTol);
  double worst_closed = 0.0;
  for (const auto& p : closed.populations) worst_closed = std::max(worst_closed, p.max_relative);
  note(o, "closed form vs summation max rel " + fmt(worst_closed, 3) + ", " + std::to_string(closed.offending_total) +
              " cases above " + fmt(kClosedFormTol));
  check_runtime(o, timer, kOracleSeconds);
  return o;
}

Outcome optimizer() {
  Outcome o;
  const Timer timer;
  int agree = 0;
  for (const auto& c : oracle::random_configs(kRandomConfigs, kRandomSeed)) {
    const auto fast = optimize_allocation(c.population, c.budget, EvaluationMode::Oracle);
    const auto scan = exhaustive_allocation(c.population, c.budget, EvaluationMode::Oracle);
    if (fast.max.value == scan.max.value) {
      ++agree;
    } else {
      require(o, false,
              "N=" + std::to_string(c.population.size()) + " N1=" + std::to_string(c.population.size1()) +
                  " c=(" + fmt(c.budget.c1) + "," + fmt(c.budget.c2) + ") C=" + fmt(c.budget.total) + ": n1 " +
                  std::to_string(fast.allocation.n1) + " vs " + std::to_string(scan.allocation.n1));
    }
  }
  note(o, std::to_string(agree) + "/" + std::to_string(kRandomConfigs) + " configurations match the exhaustive scan");
  check_runtime(o, timer, kOptimizerSeconds);
  return o;
}

Outcome dominance() {
  Outcome o;
  int checked = 0;
  int held = 0;
  auto check = [&](const AllocationReport& r, const std::string& label) {
    ++checked;
    held += r.max_var_stratified <= r.max_var_classical ? 1 : 0;
    require(o, r.max_var_stratified <= r.max_var_classical,
            label + ": " + fmt(r.max_var_stratified, 9) + " > " + fmt(r.max_var_classical, 9));
  };
  for (const auto& ref : reference::kAllocationTable) {
    for (const auto mode : {EvaluationMode::Parity, EvaluationMode::Oracle}) {
      check(build_report(StratifiedPopulation::from_weight(reference::kTablePopulation, ref.w1), kBudget, mode),
            "w1=" + fmt(ref.w1) + " " + std::string(to_string(mode)));
    }
  }
  note(o, "reference grid " + std::to_string(held) + "/" + std::to_string(checked) + " hold");
  const int grid_checked = checked;
  const int grid_held = held;
  for (const auto& c : oracle::random_configs(kRandomConfigs, kRandomSeed)) {
    for (const auto mode : {EvaluationMode::Parity, EvaluationMode::Oracle}) {
      check(build_report(c.population, c.budget, mode),
            "N=" + std::to_string(c.population.size()) + " N1=" + std::to_string(c.population.size1()) + " c=(" +
                fmt(c.budget.c1) + "," + fmt(c.budget.c2) + ") C=" + fmt(c.budget.total) + " " +
                std::string(to_string(mode)));
    }
  }
  note(o, "random " + std::to_string(held - grid_held) + "/" + std::to_string(checked - grid_checked) + " hold");
  return o;
}

Outcome table1() {
  Outcome o;
  AuditConfig config;
  const auto rows = audit_switch_weight(config);
  const std::string rendered = cli::render_table1(rows, cli::OutputFormat::Text);
  require(o, rows.size() == reference::kSwitchWeightTable.size(), "expected six rows");
  for (const auto& r : rows) {
    const std::string label = "N=" + std::to_string(r.population);
    require(o, r.error.empty(), label + ": " + r.error);
    require(o, r.residual <= kRootResidualTol, label + ": residual " + fmt(r.residual, 3));
    require(o, r.reference.has_value(), label + ": no reference value");
    require(o, rendered.find(fmt(r.root)) != std::string::npos, label + ": computed root not rendered");
    if (r.reference) {
      require(o, rendered.find(fmt(*r.reference)) != std::string::npos, label + ": reference not rendered");
      note(o, label + " root " + fmt(r.root) + " vs " + fmt(*r.reference));
    }
  }
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  const Timer timer;
  const auto pop = StratifiedPopulation::from_weight(30000, 0.25);
  const auto allocation = optimize_allocation(pop, kBudget, EvaluationMode::Parity).allocation;

  SimulationConfig config;
  config.replications = kReplications;
  config.seed = kSeed;
  const auto stratified = simulate_stratified(pop, allocation, 0.25, 0.5, config);
  for (const auto& b : check_bands(stratified)) {
    require(o, b.pass, "stratified " + b.name + " " + fmt(b.observed, 8) + " vs " + fmt(b.target, 8));
    note(o, "stratified " + b.name + " |" + fmt(b.observed - b.target, 3) + "| <= " + fmt(b.allowed, 3));
  }

  const auto classical = simulate_classical(pop, kBudget, lattice_index(pop, 0.5), config);
  require(o, classical.target_cost.has_value() && std::fabs(*classical.target_cost - 1200.0) < 1e-9,
          "expected cost target is not 1200");
  for (const auto& b : check_bands(classical)) {
    if (b.name != "cost") continue;
    require(o, b.pass, "srs cost " + fmt(b.observed, 8) + " vs " + fmt(b.target, 8));
    note(o, "srs cost " + fmt(b.observed, 8) + " within " + fmt(b.allowed, 3) + " of " + fmt(b.target));
  }
  check_runtime(o, timer, kMonteCarloSeconds);
  return o;
}

Outcome symmetry() {
  Outcome o;
  int exact_pairs = 0;
  int broken_pairs = 0;
  double worst_continuity = 0.0;
  for (const auto& ref : reference::kAllocationTable) {
    const auto pop = StratifiedPopulation::from_weight(reference::kTablePopulation, ref.w1);
    const auto opt = optimize_allocation(pop, kBudget, EvaluationMode::Parity);
    for (const double n1 : {1.0, static_cast<double>(opt.allocation.n1), 1197.0}) {
      const SampleSizes sizes{n1, implied_n2(kBudget, n1, EvaluationMode::Parity)};
      for (int i = 0; i <= 20000; ++i) {
        const double upper = 0.5 + i / 40000.0;
        const double lower = 1.0 - upper;
        if (averaged_variance_closed(pop, sizes, lower) == averaged_variance_closed(pop, sizes, upper)) {
          ++exact_pairs;
        } else {
          ++broken_pairs;
        }
      }
      for (const double edge : {pop.w1(), 1.0 - pop.w1()}) {
        const double t = std::min(edge, 1.0 - edge);
        const double left = left_region_variance(pop, sizes, t);
        const double middle = middle_region_variance(pop, sizes, t);
        worst_continuity = std::max(worst_continuity, oracle::relative_difference(middle, left));
      }
    }
  }
  require(o, broken_pairs == 0, std::to_string(broken_pairs) + " theta pairs differ");
  require(o, worst_continuity <= kContinuityTol, "branch jump " + fmt(worst_continuity, 3) + " at w1");
  note(o, std::to_string(exact_pairs) + " theta pairs identical; max branch jump " + fmt(worst_continuity, 3));

  int mirrored = 0;
  for (const auto& ref : reference::kAllocationTable) {
    for (const auto mode : {EvaluationMode::Parity, EvaluationMode::Oracle}) {
      const auto a = build_report(StratifiedPopulation::from_weight(reference::kTablePopulation, ref.w1), kBudget, mode);
      const auto b = build_report(StratifiedPopulation::from_weight(reference::kTablePopulation, 1.0 - ref.w1),
                                  kBudget.swapped(), mode);
      const bool ok = a.n1_opt == b.n2_opt && a.n2_opt == b.n1_opt && a.n_c == b.n_c &&
                      oracle::relative_difference(a.max_var_stratified, b.max_var_stratified) <= kRelabelTol &&
                      oracle::relative_difference(a.max_var_classical, b.max_var_classical) <= kRelabelTol;
      require(o, ok, "relabeling breaks w1=" + fmt(ref.w1) + " " + std::string(to_string(mode)));
      mirrored += ok ? 1 : 0;
    }
  }
  note(o, std::to_string(mirrored) + " mirrored reports agree");
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"reference-run", reference_run}, {"table2", table2},       {"oracle-equivalence", oracle_equivalence},
      {"optimizer", optimizer},             {"dominance", dominance}, {"table1", table1},
      {"monte-carlo", monte_carlo},         {"symmetry", symmetry},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  for (const auto& name : selected) {
    bool known = false;
    for (const auto& c : criteria) known = known || name == c.name;
    if (!known) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
  }

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << c.name << ": " << outcome.detail << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
