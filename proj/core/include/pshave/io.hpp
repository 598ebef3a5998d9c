#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pshave/operation.hpp"
#include "pshave/study.hpp"

namespace pshave::io {

// Profiles ------------------------------------------------------------------

/// Reads `hour,load_mw,pv_mw` with exactly 24 data rows for hours 0..23.
/// Blank lines and lines starting with '#' are skipped. Errors are
/// Error(kParse) and name the offending row and column.
DayProfile parse_profile(std::istream& in, std::string_view source = "<stream>");
DayProfile load_profile(const std::filesystem::path& path);

/// Writes the same format with round-trip precision.
void write_profile(std::ostream& out, const DayProfile& profile);

/// The synthetic two-peak profile shipped as data/jiangsu_typical.csv.
DayProfile bundled_profile();

/// Load and PV scaled by seeded noise around the bundled shape; used for
/// property checks on profiles other than the bundled one.
DayProfile random_profile(std::uint64_t seed);

// Configuration --------------------------------------------------------------

/// Built-in defaults with the bundled profile.
StudyConfig default_config();

/// JSON configuration. Top-level keys override StudyConfig fields one to one
/// (see README for the list); the optional "tariff" object holds prices and
/// the 24-entry "hour_bands" array. A relative "profile" path is resolved
/// against `base_dir`. Unknown keys are rejected.
StudyConfig parse_config(std::string_view json_text,
                         const std::filesystem::path& base_dir = {});

/// "default" returns default_config(); anything else is read as a file.
StudyConfig load_config(const std::string& path_or_default);

// Tabular output --------------------------------------------------------------

enum class Format { kCsv, kJson, kTable };

Format parse_format(std::string_view name);

/// NaN marks a not-applicable cell: empty in CSV, null in JSON, "N/A" in tables.
using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// CSV: one header line, then rows. JSON: an array of objects keyed by column.
/// Table: right-aligned text columns.
void write_table(std::ostream& out, const Table& table, Format format);

/// Parses the CSV and JSON renderings back; numeric-looking cells become
/// doubles, empty/null become NaN.
Table read_csv_table(std::istream& in);
Table read_json_table(std::string_view json_text);

// Curves ------------------------------------------------------------------------

/// C* against cycle count for each DOD: columns dod, cycles, capacity.
Table capacity_curve_table(const CellParams& cell, const std::vector<double>& dods,
                           int max_cycles, int step);

/// Battery-only round-trip efficiency against cycle count: dod, cycles, efficiency.
Table efficiency_curve_table(const CellParams& cell, const std::vector<double>& dods,
                             int max_cycles, int step);

/// Capacity-criterion life: c_end, dod, max_cycles.
Table max_cycles_capacity_table(const CellParams& cell, const std::vector<double>& c_ends,
                                const std::vector<double>& dods);

/// Efficiency-criterion life for battery-only scrap efficiencies: scrap_efficiency,
/// dod, max_cycles. DODs where the level is never reached are omitted.
Table max_cycles_efficiency_table(const CellParams& cell,
                                  const std::vector<double>& scrap_efficiencies,
                                  const std::vector<double>& dods);

Table pwl_table(const PwlCurve& curve);

/// Evenly spaced grid lo, lo+step, ..., hi (inclusive within 1e-9).
std::vector<double> grid(double lo, double hi, double step);

// Reports ------------------------------------------------------------------------

/// One row per scenario with the daily cost breakdown, benefits, lifetime,
/// peak capacity, mean nonzero DOD and the benefit convention used.
Table report_table(const ScenarioReport& report);

/// Interval-by-interval dispatch: hour, load, pv, grid, then per battery
/// discharge, charge, soc, dod.
Table dispatch_table(const DayProfile& profile, const DispatchResult& dispatch);

/// Cost breakdown of a single dispatch as a two-column item,value table.
Table cost_table(const DispatchResult& dispatch);

Table trajectory_table(const SimulationResult& result);

}  // namespace pshave::io
