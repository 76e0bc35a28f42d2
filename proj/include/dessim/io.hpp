#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dessim/engine.hpp"
#include "dessim/trace.hpp"
#include "dessim/validation.hpp"

namespace dessim {

// Ordered key/value pairs written as leading "# key: value" comment lines.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// Exact decimal-millisecond parsing: digits, optionally '.' and 1-3 digits.
// "12.5" -> 12500 us. Throws FormatError on anything else.
Duration parse_decimal_ms(std::string_view text);
// Always three fractional digits: 12500 us -> "12.500".
std::string format_decimal_ms(Duration d);

// Trace CSV: optional leading '#' lines, header "duration_ms,status_code",
// then one row per entry; row 1 is the cold start.
TraceFile parse_trace_csv(std::string_view text, std::string id);
TraceFile read_trace_csv(const std::filesystem::path& path);
std::string serialize_trace_csv(const TraceFile& trace, const Provenance& provenance = {});
void write_trace_csv(const TraceFile& trace, const std::filesystem::path& path,
                     const Provenance& provenance = {});

// All *.csv files in a directory, sorted by file name; ids are file names.
std::vector<TraceFile> read_trace_dir(const std::filesystem::path& dir);

// Results CSV: optional leading '#' lines, header
// "request_id,arrival_us,start_us,duration_us,status_code,replica_id,cold_start",
// rows in arrival order, cold_start as 0/1. Replica count and trace
// assignments are not stored; parsing recovers replicas_created and
// cold_start_count from the rows and leaves the log empty.
inline constexpr std::string_view kResultsHeader =
    "request_id,arrival_us,start_us,duration_us,status_code,replica_id,cold_start";

std::string serialize_results_csv(const SimulationResult& result, const Provenance& provenance = {});
SimulationResult parse_results_csv(std::string_view text);
void write_results(const SimulationResult& result, const std::filesystem::path& path,
                   const Provenance& provenance = {});
SimulationResult read_results(const std::filesystem::path& path);

// Response times (ms) from either a results CSV or a trace CSV, detected by
// header.
std::vector<double> read_response_times_ms(const std::filesystem::path& path);

// Report JSON.
nlohmann::ordered_json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const nlohmann::json& doc);
std::string serialize_report(const ValidationReport& report);
void write_report(const ValidationReport& report, const std::filesystem::path& path);
ValidationReport read_report(const std::filesystem::path& path);

// Writes ecdf_measured.csv, ecdf_simulated.csv and cullen_frey.csv into dir
// (created if needed) and returns their paths.
std::vector<std::filesystem::path> emit_plot_data(const ValidationReport& report,
                                                  const std::filesystem::path& dir);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace dessim
