#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "stratalloc/audit.hpp"
#include "stratalloc/report.hpp"
#include "stratalloc/simulate.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc::cli {

/// Reported numbers are rounded to 6 significant digits so that the JSON
/// text survives a parse and re-render unchanged.
nlohmann::json to_json(const AllocationReport& report);
nlohmann::json to_json(const std::vector<SwitchWeightRow>& rows);
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const SimulationSummary& summary, const std::vector<BandCheck>& bands);

/// Pretty JSON text with a trailing newline.
std::string dump(const nlohmann::json& value);

std::string render_allocation(const AllocationReport& report, OutputFormat format);
std::string render_table2(const std::vector<AllocationReport>& rows, OutputFormat format);
std::string render_table1(const std::vector<SwitchWeightRow>& rows, OutputFormat format);
std::string render_curve(const VarianceCurve& curve, OutputFormat format);
std::string render_audit(const AuditReport& report, OutputFormat format);
std::string render_simulation(const SimulationSummary& summary, const std::vector<BandCheck>& bands,
                              OutputFormat format);

}  // namespace stratalloc::cli
