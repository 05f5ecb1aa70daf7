#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gdnm/bench.hpp"
#include "gdnm/composite.hpp"
#include "gdnm/solver.hpp"

namespace gdnm::report {

inline constexpr const char* kSchemaVersion = "1.0";

/// Build metadata echoed into every report.
nlohmann::json build_info();

// JSON serialization. Non-finite doubles map to null and back to NaN, so
// documents round-trip losslessly.
nlohmann::json to_json(const solver::IterationRecord& rec);
solver::IterationRecord iteration_from_json(const nlohmann::json& j);

nlohmann::json to_json(const solver::SolveReport& rep);
solver::SolveReport solve_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const composite::CompositeReport& rep);

nlohmann::json to_json(const bench::BenchRow& row);
bench::BenchRow bench_row_from_json(const nlohmann::json& j);

/// Top-level document: schema version, effective configuration echo,
/// build metadata, and the result payload.
nlohmann::json make_document(const std::string& kind, nlohmann::json config,
                             nlohmann::json result);

/// CSV table of bench rows; header fixed to
/// m,n,solver,iterations,wall_seconds,final_eta,final_objective,status.
std::string bench_rows_csv(const std::vector<bench::BenchRow>& rows);
std::vector<bench::BenchRow> bench_rows_from_csv(const std::string& csv);

/// CSV of a solve trace (one line per accepted iteration).
std::string trace_csv(const std::vector<solver::IterationRecord>& trace);

} // namespace gdnm::report
