#include "render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stratalloc/format.hpp"

namespace stratalloc::cli {

using nlohmann::json;

namespace {

json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round_significant(value);
}

json number(const std::optional<double>& value) { return value ? number(*value) : json(nullptr); }

std::string text(double value) { return format_number(value); }

std::string text(const std::optional<double>& value) { return value ? format_number(*value) : "n/a"; }

std::string flag(bool flagged) { return flagged ? "FLAG" : "ok"; }

// Left-aligned columns padded to the widest cell.
std::string columns(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
  return out.str();
}

std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

json notes_json(const std::vector<AuditNote>& notes) {
  json out = json::array();
  for (const auto& n : notes) {
    out.push_back({{"topic", n.topic}, {"detail", n.detail}, {"expected", number(n.expected)},
                   {"actual", number(n.actual)}});
  }
  return out;
}

std::vector<std::string> table2_cells(const AllocationReport& r) {
  return {text(r.w1),
          std::to_string(r.n1_opt),
          std::to_string(r.n_w),
          std::to_string(r.n_c),
          text(r.max_var_stratified),
          text(r.max_var_classical),
          text(r.reduction_percent)};
}

const std::vector<std::string> kTable2Header{"w1",         "n1_opt", "n_w", "n_c", "max_var_stratified",
                                             "max_var_classical", "reduction_percent"};

}  // namespace

std::string dump(const json& value) { return value.dump(2) + "\n"; }

json to_json(const AllocationReport& r) {
  return {{"n1_opt", r.n1_opt},
          {"n2_opt", r.n2_opt},
          {"n_w", r.n_w},
          {"n_c", r.n_c},
          {"theta_tilde", number(r.theta_tilde)},
          {"max_var_stratified", number(r.max_var_stratified)},
          {"max_var_classical", number(r.max_var_classical)},
          {"reduction_percent", number(r.reduction_percent)},
          {"mode", std::string(to_string(r.mode))},
          {"audit_notes", notes_json(r.audit_notes)}};
}

json to_json(const std::vector<SwitchWeightRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row{{"N", r.population},
             {"w1_star", number(r.root)},
             {"N1", r.size1},
             {"residual", r.residual},
             {"reference", number(r.reference)},
             {"delta", r.reference ? number(r.root - *r.reference) : json(nullptr)},
             {"regime_switch_w1", number(r.regime_switch)},
             {"max_ratio_at_zero", number(r.max_ratio_at_zero)},
             {"flagged", r.flagged}};
    if (!r.error.empty()) row["error"] = r.error;
    out.push_back(row);
  }
  return out;
}

std::string render_allocation(const AllocationReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json:
      return dump(to_json(r));
    case OutputFormat::Csv:
      return csv({{"w1", "n1_opt", "n2_opt", "n_w", "n_c", "theta_tilde", "max_var_stratified", "max_var_classical",
                   "reduction_percent", "mode"},
                  {text(r.w1), std::to_string(r.n1_opt), std::to_string(r.n2_opt), std::to_string(r.n_w),
                   std::to_string(r.n_c), text(r.theta_tilde), text(r.max_var_stratified), text(r.max_var_classical),
                   text(r.reduction_percent), std::string(to_string(r.mode))}});
    case OutputFormat::Text:
      break;
  }
  std::ostringstream out;
  out << columns({{"mode:", std::string(to_string(r.mode))},
                  {"w1:", text(r.w1)},
                  {"optimal n1:", std::to_string(r.n1_opt)},
                  {"optimal n2:", std::to_string(r.n2_opt)},
                  {"n_w:", std::to_string(r.n_w)},
                  {"n_c:", std::to_string(r.n_c) + " (" + text(r.n_c_real) + ")"},
                  {"theta_tilde:", text(r.theta_tilde) + " (" + std::string(to_string(r.regime)) + ")"},
                  {"max variance stratified:", text(r.max_var_stratified)},
                  {"max variance classical:", text(r.max_var_classical)},
                  {"reduction:", text(r.reduction_percent) + " %"}});
  if (!r.audit_notes.empty()) {
    out << "audit notes:\n";
    for (const auto& n : r.audit_notes) out << "  [" << n.topic << "] " << n.detail << '\n';
  }
  return out.str();
}

std::string render_table2(const std::vector<AllocationReport>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json out = json::array();
    for (const auto& r : rows) {
      json row = to_json(r);
      row["w1"] = number(r.w1);
      out.push_back(row);
    }
    return dump(out);
  }
  std::vector<std::vector<std::string>> cells{kTable2Header};
  for (const auto& r : rows) cells.push_back(table2_cells(r));
  if (format == OutputFormat::Csv) return csv(cells);
  std::string body = columns(cells);
  for (const auto& r : rows) {
    for (const auto& n : r.audit_notes) {
      if (n.topic.rfind("reference", 0) == 0) body += "w1=" + text(r.w1) + " [" + n.topic + "] " + n.detail + "\n";
    }
  }
  return body;
}

std::string render_table1(const std::vector<SwitchWeightRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) return dump(to_json(rows));
  std::vector<std::vector<std::string>> cells{
      {"N", "w1_star", "N1", "reference", "delta", "residual", "regime_switch_w1", "flag"}};
  for (const auto& r : rows) {
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.2e", r.residual);
    cells.push_back({std::to_string(r.population), r.error.empty() ? text(r.root) : "error", std::to_string(r.size1),
                     text(r.reference), r.reference ? text(r.root - *r.reference) : "n/a", residual,
                     text(r.regime_switch), flag(r.flagged)});
  }
  if (format == OutputFormat::Csv) return csv(cells);
  std::string body = columns(cells);
  for (const auto& r : rows) {
    if (!r.error.empty()) body += "N=" + std::to_string(r.population) + ": " + r.error + "\n";
  }
  return body;
}

std::string render_curve(const VarianceCurve& curve, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json points = json::array();
    for (const auto& p : curve.points) {
      points.push_back({{"theta", number(p.theta)},
                        {"var_stratified", number(p.stratified)},
                        {"var_classical", number(p.classical)}});
    }
    return dump({{"n1", number(curve.n1)},
                 {"n2", number(curve.n2)},
                 {"n_c", curve.classical_n},
                 {"mode", std::string(to_string(curve.mode))},
                 {"points", points}});
  }
  std::ostringstream out;
  out << "theta,var_stratified,var_classical\n";
  for (const auto& p : curve.points) {
    out << text(p.theta) << ',' << text(p.stratified) << ',' << text(p.classical) << '\n';
  }
  return out.str();
}

json to_json(const AuditReport& a) {
  json oracle{{"tolerance", a.oracle.tolerance}, {"offending_total", a.oracle.offending_total}};
  json populations = json::array();
  for (const auto& p : a.oracle.populations) {
    populations.push_back({{"N", p.population},
                           {"cases", p.cases},
                           {"max_relative_deviation", p.max_relative},
                           {"worst", {{"N1", p.worst.size1}, {"n1", p.worst.n1}, {"n2", p.worst.n2}, {"m", p.worst.m}}}});
  }
  oracle["populations"] = populations;
  json offending = json::array();
  for (const auto& c : a.oracle.offending) {
    offending.push_back({{"N", c.population},
                         {"N1", c.size1},
                         {"n1", c.n1},
                         {"n2", c.n2},
                         {"m", c.m},
                         {"summed", c.summed},
                         {"closed", c.closed},
                         {"relative", c.relative}});
  }
  oracle["offending"] = offending;

  json half = json::array();
  for (const auto& r : a.half_formula) {
    half.push_back({{"w1", number(r.w1)},
                    {"n1", r.n1},
                    {"printed", number(r.printed)},
                    {"piecewise", number(r.piecewise)},
                    {"relative_deviation", number(r.relative)},
                    {"flagged", r.flagged},
                    {"optimum_printed", number(r.optimum_printed)},
                    {"optimum_piecewise", number(r.optimum_piecewise)},
                    {"optimum_relative_deviation", r.optimum_relative},
                    {"optimum_flagged", r.optimum_flagged}});
  }

  json closed = json::array();
  for (const auto& r : a.closed_form) {
    closed.push_back({{"w1", number(r.w1)},
                      {"closed_form_n1", number(r.closed)},
                      {"closed_form_floor", r.closed_floor},
                      {"optimizer_n1", r.optimizer},
                      {"regime", std::string(to_string(r.regime))},
                      {"crossing_n1", number(r.crossing_n1)},
                      {"flagged", r.flagged}});
  }

  json table = json::array();
  for (const auto& r : a.table) {
    json cells = json::array();
    for (const auto& c : r.cells) {
      cells.push_back({{"column", c.column},
                       {"printed", number(c.printed)},
                       {"computed", number(c.computed)},
                       {"flagged", c.flagged}});
    }
    table.push_back({{"w1", number(r.w1)}, {"cells", cells}, {"local_search_value", number(r.local_search_value)}});
  }

  json run = json::array();
  for (const auto& c : a.reference_run) {
    run.push_back({{"column", c.column},
                   {"printed", number(c.printed)},
                   {"computed", number(c.computed)},
                   {"flagged", c.flagged}});
  }

  json curve = json::array();
  for (const auto& c : a.curve_allocation) {
    curve.push_back({{"source", c.source}, {"n1", c.n1}, {"n2", number(c.n2)}, {"objective", number(c.objective)}});
  }

  return {{"mode", std::string(to_string(a.mode))},
          {"oracle", oracle},
          {"half_formula", half},
          {"closed_form", closed},
          {"switch_weight", to_json(a.switch_weight)},
          {"table", table},
          {"reference_run", run},
          {"curve_allocation", curve}};
}

std::string render_audit(const AuditReport& a, OutputFormat format) {
  if (format == OutputFormat::Json) return dump(to_json(a));
  if (format == OutputFormat::Csv) {
    std::vector<std::vector<std::string>> cells{{"section", "key", "column", "printed", "computed", "flagged"}};
    for (const auto& p : a.oracle.populations) {
      char dev[32];
      std::snprintf(dev, sizeof dev, "%.3e", p.max_relative);
      cells.push_back({"oracle", "N=" + std::to_string(p.population), "max_relative_deviation",
                       text(a.oracle.tolerance), dev, flag(p.max_relative > a.oracle.tolerance)});
    }
    for (const auto& r : a.half_formula) {
      cells.push_back({"half_formula", "w1=" + text(r.w1), "D(0.5)", text(r.printed), text(r.piecewise),
                       flag(r.flagged)});
      cells.push_back({"half_formula", "w1=" + text(r.w1), "optimum", text(r.optimum_printed),
                       text(r.optimum_piecewise), flag(r.optimum_flagged)});
    }
    for (const auto& r : a.closed_form) {
      cells.push_back({"closed_form", "w1=" + text(r.w1), "n1", std::to_string(r.closed_floor),
                       std::to_string(r.optimizer), flag(r.flagged)});
    }
    for (const auto& r : a.switch_weight) {
      cells.push_back({"switch_weight", "N=" + std::to_string(r.population), "w1_star", text(r.reference),
                       text(r.root), flag(r.flagged)});
    }
    for (const auto& r : a.table) {
      for (const auto& c : r.cells) {
        cells.push_back({"table", "w1=" + text(r.w1), c.column, text(c.printed), text(c.computed), flag(c.flagged)});
      }
    }
    for (const auto& c : a.reference_run) {
      cells.push_back({"reference_run", "w1=0.25", c.column, text(c.printed), text(c.computed), flag(c.flagged)});
    }
    for (const auto& c : a.curve_allocation) {
      cells.push_back({"curve_allocation", c.source, "objective", std::to_string(c.n1), text(c.objective), ""});
    }
    return csv(cells);
  }

  std::ostringstream out;
  out << "mode: " << to_string(a.mode) << "\n\n";

  out << "(a) closed form vs. nuisance-set summation (tolerance " << text(a.oracle.tolerance) << ")\n";
  std::vector<std::vector<std::string>> oracle{{"N", "cases", "max rel. deviation", "worst (N1, n1, n2, m)"}};
  for (const auto& p : a.oracle.populations) {
    char dev[32];
    std::snprintf(dev, sizeof dev, "%.3e", p.max_relative);
    oracle.push_back({std::to_string(p.population), std::to_string(p.cases), dev,
                      "(" + std::to_string(p.worst.size1) + ", " + std::to_string(p.worst.n1) + ", " +
                          std::to_string(p.worst.n2) + ", " + std::to_string(p.worst.m) + ")"});
  }
  out << columns(oracle) << "offending cases: " << a.oracle.offending_total << '\n';
  for (const auto& c : a.oracle.offending) {
    out << "  N=" << c.population << " N1=" << c.size1 << " n=(" << c.n1 << ", " << c.n2 << ") m=" << c.m
        << " summed=" << format_number(c.summed, 12) << " closed=" << format_number(c.closed, 12) << '\n';
  }

  out << "\n(b) printed D(1/2) formulas vs. piecewise form\n";
  std::vector<std::vector<std::string>> half{
      {"w1", "n1", "printed", "piecewise", "rel. dev", "flag", "optimum printed", "optimum piecewise", "flag"}};
  for (const auto& r : a.half_formula) {
    half.push_back({text(r.w1), std::to_string(r.n1), text(r.printed), text(r.piecewise), text(r.relative),
                    flag(r.flagged), text(r.optimum_printed), text(r.optimum_piecewise), flag(r.optimum_flagged)});
  }
  out << columns(half);

  out << "\n(c) closed-form n1 vs. optimizer\n";
  std::vector<std::vector<std::string>> closed{
      {"w1", "closed form", "floor", "optimizer", "regime", "crossing n1", "flag"}};
  for (const auto& r : a.closed_form) {
    closed.push_back({text(r.w1), text(r.closed), std::to_string(r.closed_floor), std::to_string(r.optimizer),
                      std::string(to_string(r.regime)), text(r.crossing_n1), flag(r.flagged)});
  }
  out << columns(closed);

  out << "\n(d) switch weight root vs. reference values\n" << render_table1(a.switch_weight, OutputFormat::Text);

  out << "\n(e) reference allocation table, cell by cell\n";
  if (a.table.empty()) out << "not applicable for this configuration\n";
  std::vector<std::vector<std::string>> table{{"w1", "column", "printed", "computed", "flag"}};
  for (const auto& r : a.table) {
    for (const auto& c : r.cells) {
      table.push_back({text(r.w1), c.column, text(c.printed), text(c.computed), flag(c.flagged)});
    }
  }
  if (!a.table.empty()) out << columns(table);
  for (const auto& r : a.table) {
    if (r.local_search_value) {
      out << "w1=" << text(r.w1) << ": objective at the printed n1 with a local theta search = "
          << text(r.local_search_value) << '\n';
    }
  }

  if (!a.reference_run.empty()) {
    out << "\nreference run (w1 = 0.25)\n";
    std::vector<std::vector<std::string>> run{{"column", "printed", "computed", "flag"}};
    for (const auto& c : a.reference_run) {
      run.push_back({c.column, text(c.printed), text(c.computed), flag(c.flagged)});
    }
    out << columns(run);
  }

  if (!a.curve_allocation.empty()) {
    out << "\nw1 = 0.5 allocations, table row vs. plotted curve\n";
    std::vector<std::vector<std::string>> curve{{"source", "n1", "n2", "objective"}};
    for (const auto& c : a.curve_allocation) {
      curve.push_back({c.source, std::to_string(c.n1), text(c.n2), format_number(c.objective, 9)});
    }
    out << columns(curve);
  }
  return out.str();
}

json to_json(const SimulationSummary& s, const std::vector<BandCheck>& bands) {
  json checks = json::array();
  for (const auto& b : bands) {
    checks.push_back({{"name", b.name},
                      {"observed", number(b.observed)},
                      {"target", number(b.target)},
                      {"allowed", number(b.allowed)},
                      {"pass", b.pass}});
  }
  return {{"mode", std::string(to_string(s.mode))},
          {"replications", s.replications},
          {"estimator_mean", number(s.estimator_mean)},
          {"estimator_variance", number(s.estimator_variance)},
          {"standard_error_mean", number(s.standard_error_mean)},
          {"within_variance", number(s.within_variance)},
          {"expected_cost_empirical", number(s.expected_cost_empirical)},
          {"cost_standard_error", number(s.cost_standard_error)},
          {"target_mean", number(s.target_mean)},
          {"target_variance", number(s.target_variance)},
          {"target_cost", number(s.target_cost)},
          {"bands", checks}};
}

std::string render_simulation(const SimulationSummary& s, const std::vector<BandCheck>& bands,
                              OutputFormat format) {
  if (format == OutputFormat::Json) return dump(to_json(s, bands));
  std::vector<std::vector<std::string>> cells{{"band", "observed", "target", "allowed", "result"}};
  for (const auto& b : bands) {
    cells.push_back({b.name, text(b.observed), text(b.target), text(b.allowed), b.pass ? "pass" : "FAIL"});
  }
  if (format == OutputFormat::Csv) return csv(cells);
  std::ostringstream out;
  out << columns({{"mode:", std::string(to_string(s.mode))},
                  {"replications:", std::to_string(s.replications)},
                  {"estimator mean:", text(s.estimator_mean)},
                  {"estimator variance:", text(s.estimator_variance)},
                  {"standard error:", text(s.standard_error_mean)}});
  if (s.within_variance) out << "within-theta1 variance: " << text(s.within_variance) << '\n';
  if (s.expected_cost_empirical) out << "mean cost: " << text(s.expected_cost_empirical) << '\n';
  out << columns(cells);
  return out.str();
}

}  // namespace stratalloc::cli
