#include "pshave/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pshave/error.hpp"
#include "pshave/format.hpp"

namespace pshave::io {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kHours = 24;

// Synthetic load and PV of a typical weekday, MW, hours 0..23.
constexpr std::array<double, kHours> kBundledLoad = {
    5.0, 4.8, 4.6, 4.5, 4.5, 4.7, 5.2, 6.0, 6.8, 7.3, 7.5, 7.6,
    7.4, 7.3, 7.5, 7.6, 7.5, 7.0, 6.8, 7.2, 7.66, 7.6, 7.2, 6.0};

double bundled_pv(std::size_t hour) {
    if (hour < 6 || hour > 19) return 0.0;
    const double z = (static_cast<double>(hour) - 13.0) / 2.6;
    return 10.0 * std::exp(-0.5 * z * z);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_double(const std::string& text, double& value) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, value);
    return res.ec == std::errc{} && res.ptr == end;
}

Error parse_error(std::string_view source, std::size_t line, const std::string& msg) {
    return Error(ErrorCode::kParse,
                 std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

// Config helpers ---------------------------------------------------------------

double number_at(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw Error(ErrorCode::kParse, "config key '" + key + "' must be a number");
    }
    return v.get<double>();
}

int integer_at(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw Error(ErrorCode::kParse, "config key '" + key + "' must be an integer");
    }
    return v.get<int>();
}

std::string string_at(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw Error(ErrorCode::kParse, "config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

PriceBand parse_band(const std::string& name) {
    if (name == "peak") return PriceBand::kPeak;
    if (name == "normal") return PriceBand::kNormal;
    if (name == "valley") return PriceBand::kValley;
    throw Error(ErrorCode::kParse, "unknown price band '" + name + "'");
}

void apply_tariff(const json& obj, Tariff& tariff) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::kParse, "config key 'tariff' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (key == "peak") tariff.peak = number_at(obj, key);
        else if (key == "normal") tariff.normal = number_at(obj, key);
        else if (key == "valley") tariff.valley = number_at(obj, key);
        else if (key == "peak_capacity_price") tariff.peak_capacity_price = number_at(obj, key);
        else if (key == "om_cost") tariff.om_cost = number_at(obj, key);
        else if (key == "days_per_month") tariff.days_per_month = number_at(obj, key);
        else if (key == "hour_bands") {
            if (!value.is_array() || value.size() != kHours) {
                throw Error(ErrorCode::kParse, "tariff.hour_bands must list 24 band names");
            }
            for (std::size_t h = 0; h < kHours; ++h) {
                if (!value[h].is_string()) {
                    throw Error(ErrorCode::kParse, "tariff.hour_bands entries must be strings");
                }
                tariff.hour_band[h] = parse_band(value[h].get<std::string>());
            }
        } else {
            throw Error(ErrorCode::kParse, "unknown tariff key '" + key + "'");
        }
    }
}

// Table rendering --------------------------------------------------------------

bool is_na(const Cell& cell) {
    const double* v = std::get_if<double>(&cell);
    return v != nullptr && std::isnan(*v);
}

std::string cell_text(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    return format_number(std::get<double>(cell));
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (!is_na(row[c])) out << cell_text(row[c]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    // Numbers are emitted through format_number so JSON and CSV carry the
    // same digits.
    out << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n  {" : "\n  {");
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ", ";
            out << json(table.columns[c]).dump() << ": ";
            if (is_na(row[c])) {
                out << "null";
            } else if (const auto* s = std::get_if<std::string>(&row[c])) {
                out << json(*s).dump();
            } else {
                const double v = std::get<double>(row[c]);
                out << (std::isfinite(v) ? format_number(v) : json(format_number(v)).dump());
            }
        }
        out << "}";
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
}

void write_text(std::ostream& out, const Table& table) {
    std::vector<std::vector<std::string>> text;
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string s;
            if (is_na(row[c])) {
                s = "N/A";
            } else if (const auto* str = std::get_if<std::string>(&row[c])) {
                s = *str;
            } else {
                const double v = std::get<double>(row[c]);
                int digits = 4;
                if (v == std::round(v) || std::abs(v) >= 1000.0) digits = 0;
                else if (std::abs(v) >= 10.0) digits = 2;
                s = format_fixed(v, digits);
            }
            width[c] = std::max(width[c], s.size());
            line.push_back(std::move(s));
        }
        text.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        out << '\n';
    };
    emit(table.columns);
    for (const auto& line : text) emit(line);
}

Cell parse_cell(const std::string& text) {
    if (text.empty()) return kNaN;
    double v = 0.0;
    if (parse_double(text, v)) return v;
    return text;
}

}  // namespace

// Profiles ----------------------------------------------------------------------

DayProfile parse_profile(std::istream& in, std::string_view source) {
    DayProfile profile;
    profile.dt = 1.0;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const std::vector<std::string> cells = split_csv(t);
        if (!have_header) {
            if (cells != std::vector<std::string>{"hour", "load_mw", "pv_mw"}) {
                throw parse_error(source, line_no, "header must be 'hour,load_mw,pv_mw'");
            }
            have_header = true;
            continue;
        }
        const std::size_t row = profile.load.size() + 1;
        if (cells.size() != 3) {
            throw parse_error(source, line_no,
                              "row " + std::to_string(row) + ": expected 3 columns, found " +
                                  std::to_string(cells.size()));
        }
        static constexpr const char* kNames[] = {"hour", "load_mw", "pv_mw"};
        double v[3];
        for (int c = 0; c < 3; ++c) {
            if (!parse_double(cells[c], v[c])) {
                throw parse_error(source, line_no,
                                  "row " + std::to_string(row) + ", column " + kNames[c] +
                                      ": '" + cells[c] + "' is not a number");
            }
        }
        const auto expected_hour = static_cast<double>(profile.load.size());
        if (v[0] != expected_hour) {
            throw parse_error(source, line_no,
                              "row " + std::to_string(row) + ", column hour: expected " +
                                  format_number(expected_hour));
        }
        for (int c = 1; c < 3; ++c) {
            if (!(v[c] >= 0.0) || !std::isfinite(v[c])) {
                throw parse_error(source, line_no,
                                  "row " + std::to_string(row) + ", column " + kNames[c] +
                                      ": must be finite and non-negative");
            }
        }
        profile.load.push_back(v[1]);
        profile.pv.push_back(v[2]);
    }
    if (!have_header) {
        throw parse_error(source, line_no, "missing header 'hour,load_mw,pv_mw'");
    }
    if (profile.load.size() != kHours) {
        throw parse_error(source, line_no,
                          "expected 24 rows, found " + std::to_string(profile.load.size()));
    }
    return profile;
}

DayProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kParse, "cannot open profile '" + path.string() + "'");
    }
    return parse_profile(in, path.string());
}

void write_profile(std::ostream& out, const DayProfile& profile) {
    out << "hour,load_mw,pv_mw\n";
    for (std::size_t t = 0; t < profile.intervals(); ++t) {
        out << t << ',' << format_number(profile.load[t]) << ','
            << format_number(profile.pv[t]) << '\n';
    }
}

DayProfile bundled_profile() {
    DayProfile p;
    p.dt = 1.0;
    for (std::size_t h = 0; h < kHours; ++h) {
        p.load.push_back(kBundledLoad[h]);
        p.pv.push_back(bundled_pv(h));
    }
    return p;
}

DayProfile random_profile(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(0.8, 1.2);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_real_distribution<double> sky(0.3, 1.1);
    const double load_scale = level(rng);
    const double pv_scale = sky(rng);
    DayProfile p = bundled_profile();
    for (std::size_t h = 0; h < kHours; ++h) {
        p.load[h] = std::max(0.5, p.load[h] * load_scale + jitter(rng));
        p.pv[h] = std::max(0.0, p.pv[h] * pv_scale * (1.0 + 0.5 * jitter(rng)));
    }
    return p;
}

// Configuration -----------------------------------------------------------------

StudyConfig default_config() {
    StudyConfig config;
    config.profile = bundled_profile();
    return config;
}

StudyConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "config must be a JSON object");
    }
    StudyConfig cfg = default_config();
    StorageUnit& st = cfg.storage;
    CellParams& cell = st.cell;
    for (const auto& [key, value] : doc.items()) {
        if (key == "e_cap_mwh") st.e_cap = number_at(doc, key);
        else if (key == "p_dis_max_mw") st.p_dis_max = number_at(doc, key);
        else if (key == "p_cha_max_mw") st.p_cha_max = number_at(doc, key);
        else if (key == "eta_dis") st.eta_dis = number_at(doc, key);
        else if (key == "eta_cha") st.eta_cha = number_at(doc, key);
        else if (key == "unit_investment") st.unit_invest = number_at(doc, key);
        else if (key == "v_cha") cell.v_cha = number_at(doc, key);
        else if (key == "v_dis") cell.v_dis = number_at(doc, key);
        else if (key == "n_cha") cell.n_cha = number_at(doc, key);
        else if (key == "n_dis") cell.n_dis = number_at(doc, key);
        else if (key == "c0") cell.c0 = number_at(doc, key);
        else if (key == "r0") cell.r0 = number_at(doc, key);
        else if (key == "eta_inv") cell.eta_inv = number_at(doc, key);
        else if (key == "t_end_cal") {
            cell.t_end_cal = value.is_null() ? std::numeric_limits<double>::infinity()
                                             : number_at(doc, key);
        }
        else if (key == "c_end") cfg.c_end = number_at(doc, key);
        else if (key == "inverter_passes") cfg.inverter_passes = integer_at(doc, key);
        else if (key == "segments") cfg.segments = integer_at(doc, key);
        else if (key == "spacing") {
            const std::string s = string_at(doc, key);
            if (s == "uniform") cfg.spacing = Spacing::kUniform;
            else if (s == "geometric") cfg.spacing = Spacing::kGeometric;
            else throw Error(ErrorCode::kParse, "spacing must be 'uniform' or 'geometric'");
        }
        else if (key == "soc") {
            const std::string s = string_at(doc, key);
            if (s == "cyclic") cfg.soc = SocBoundary::kCyclic;
            else if (s == "fixed") cfg.soc = SocBoundary::kFixedInitial;
            else throw Error(ErrorCode::kParse, "soc must be 'cyclic' or 'fixed'");
        }
        else if (key == "solver_tol") cfg.solver.tol = number_at(doc, key);
        else if (key == "max_iterations") cfg.solver.max_iterations = integer_at(doc, key);
        else if (key == "max_sim_days") cfg.max_sim_days = integer_at(doc, key);
        else if (key == "resolve_interval") cfg.resolve_interval = integer_at(doc, key);
        else if (key == "profile") {
            std::filesystem::path p = string_at(doc, key);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            cfg.profile = load_profile(p);
            cfg.profile_path = p.string();
        }
        else if (key == "tariff") apply_tariff(value, cfg.tariff);
        else throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
    }

    validate(st);
    validate(cfg.tariff);
    validate(CapacityBased{cfg.c_end});
    if (cfg.inverter_passes != 1 && cfg.inverter_passes != 2) {
        throw Error(ErrorCode::kValidation, "inverter_passes must be 1 or 2");
    }
    if (cfg.segments < 1 || cfg.segments > 64) {
        throw Error(ErrorCode::kValidation, "segments must lie in [1, 64]");
    }
    if (!(cfg.solver.tol > 0.0 && cfg.solver.tol < 1e-3)) {
        throw Error(ErrorCode::kValidation, "solver_tol must lie in (0, 1e-3)");
    }
    if (cfg.max_sim_days < 1 || cfg.resolve_interval < 1 || cfg.solver.max_iterations < 1) {
        throw Error(ErrorCode::kValidation,
                    "max_sim_days, resolve_interval and max_iterations must be positive");
    }
    return cfg;
}

StudyConfig load_config(const std::string& path_or_default) {
    if (path_or_default == "default") return default_config();
    const std::filesystem::path path(path_or_default);
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kParse, "cannot open config '" + path_or_default + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

// Tables -------------------------------------------------------------------------

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::kCsv;
    if (name == "json") return Format::kJson;
    if (name == "table") return Format::kTable;
    throw Error(ErrorCode::kValidation, "format must be csv, json or table");
}

void write_table(std::ostream& out, const Table& table, Format format) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw Error(ErrorCode::kValidation, "table row width does not match its header");
        }
    }
    switch (format) {
        case Format::kCsv: write_csv(out, table); break;
        case Format::kJson: write_json(out, table); break;
        case Format::kTable: write_text(out, table); break;
    }
}

Table read_csv_table(std::istream& in) {
    Table table;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv(line);
        if (header) {
            table.columns = std::move(cells);
            header = false;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& c : cells) row.push_back(parse_cell(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table read_json_table(std::string_view json_text) {
    const auto doc = nlohmann::ordered_json::parse(json_text.begin(), json_text.end());
    if (!doc.is_array()) {
        throw Error(ErrorCode::kParse, "expected a JSON array of row objects");
    }
    Table table;
    for (const auto& obj : doc) {
        if (table.columns.empty()) {
            for (const auto& [key, value] : obj.items()) table.columns.push_back(key);
        }
        std::vector<Cell> row;
        for (const auto& col : table.columns) {
            const auto& v = obj.at(col);
            if (v.is_null()) row.emplace_back(kNaN);
            else if (v.is_number()) row.emplace_back(v.get<double>());
            else row.push_back(parse_cell(v.get<std::string>()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) {
        throw Error(ErrorCode::kValidation, "grid needs lo <= hi and a positive step");
    }
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    // Rounded to 12 decimals so 0.1 * 3 prints as 0.3 in the emitted tables.
    for (long i = 0; i <= n; ++i) {
        out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
}

Table capacity_curve_table(const CellParams& cell, const std::vector<double>& dods,
                           int max_cycles, int step) {
    const DegradationCoeffs c = coeffs_at_voltage(cell.mean_voltage());
    Table t{{"dod", "cycles", "capacity"}, {}};
    for (double d : dods) {
        for (int n = 0; n <= max_cycles; n += step) {
            const double q = throughput_from_cycles(n, d, cell.c0);
            t.rows.push_back({d, static_cast<double>(n), capacity_fade(q, d, c)});
        }
    }
    return t;
}

Table efficiency_curve_table(const CellParams& cell, const std::vector<double>& dods,
                             int max_cycles, int step) {
    const DegradationCoeffs c = coeffs_at_voltage(cell.mean_voltage());
    Table t{{"dod", "cycles", "efficiency"}, {}};
    for (double d : dods) {
        for (int n = 0; n <= max_cycles; n += step) {
            const double q = throughput_from_cycles(n, d, cell.c0);
            const double clr = cell.c0 * cell.r0 * cap_res_product(q, d, c);
            t.rows.push_back({d, static_cast<double>(n), battery_efficiency(clr, cell)});
        }
    }
    return t;
}

Table max_cycles_capacity_table(const CellParams& cell, const std::vector<double>& c_ends,
                                const std::vector<double>& dods) {
    const DegradationCoeffs c = coeffs_at_voltage(cell.mean_voltage());
    Table t{{"c_end", "dod", "max_cycles"}, {}};
    for (double ce : c_ends) {
        for (double d : dods) {
            t.rows.push_back({ce, d, max_cycles_capacity(ce, d, cell.c0, c)});
        }
    }
    return t;
}

Table max_cycles_efficiency_table(const CellParams& cell,
                                  const std::vector<double>& scrap_efficiencies,
                                  const std::vector<double>& dods) {
    const DegradationCoeffs c = coeffs_at_voltage(cell.mean_voltage());
    Table t{{"scrap_efficiency", "dod", "max_cycles"}, {}};
    for (double eff : scrap_efficiencies) {
        const ScrapThreshold th = threshold_from_battery_efficiency(eff, cell);
        for (double d : dods) {
            try {
                t.rows.push_back({eff, d, max_cycles_efficiency(th, d, cell.c0, c)});
            } catch (const TargetUnreachable&) {
            }
        }
    }
    return t;
}

Table pwl_table(const PwlCurve& curve) {
    Table t{{"dod", "cost"}, {}};
    for (const Breakpoint& b : curve.points()) t.rows.push_back({b.d, b.g});
    return t;
}

Table report_table(const ScenarioReport& report) {
    Table t{{"scenario", "status", "daily_total_cost", "daily_energy_cost", "daily_om_cost",
             "daily_degradation_cost", "daily_peak_load_cost", "daily_benefit", "lifetime_days",
             "lifetime_benefit", "benefit_convention", "lifetime_benefit_gross",
             "lifetime_benefit_net", "peak_capacity_mw", "mean_nonzero_dod"},
            {}};
    for (const ScenarioRow& r : report.rows) {
        const bool storage = r.scenario != Scenario::kNoStorage;
        if (!r.ok) {
            std::vector<Cell> row{std::string(scenario_label(r.scenario)), "failed"};
            row.resize(t.columns.size(), kNaN);
            t.rows.push_back(std::move(row));
            continue;
        }
        t.rows.push_back({std::string(scenario_label(r.scenario)),
                          std::string("ok"),
                          r.daily_total,
                          r.daily_energy,
                          r.daily_om,
                          r.daily_degradation,
                          r.daily_peak_cost,
                          storage ? r.daily_benefit : kNaN,
                          storage ? r.lifetime_days : kNaN,
                          storage ? r.lifetime_benefit : kNaN,
                          storage ? Cell{std::string(to_string(r.convention))} : Cell{kNaN},
                          storage ? r.lifetime_benefit_gross : kNaN,
                          storage ? r.lifetime_benefit_net : kNaN,
                          r.peak_mw,
                          storage ? r.mean_nonzero_dod : kNaN});
    }
    return t;
}

Table dispatch_table(const DayProfile& profile, const DispatchResult& dispatch) {
    Table t{{"hour", "load_mw", "pv_mw", "grid_mw"}, {}};
    for (std::size_t i = 0; i < dispatch.batteries.size(); ++i) {
        const std::string k = std::to_string(i);
        for (const char* stem : {"discharge_mw_", "charge_mw_", "soc_mwh_", "dod_"}) {
            t.columns.push_back(stem + k);
        }
    }
    for (std::size_t h = 0; h < profile.intervals(); ++h) {
        std::vector<Cell> row{static_cast<double>(h) * profile.dt, profile.load[h],
                              dispatch.pv_used[h], dispatch.grid[h]};
        for (const BatteryTrace& b : dispatch.batteries) {
            row.insert(row.end(), {b.discharge[h], b.charge[h], b.soc[h], b.dod[h]});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cost_table(const DispatchResult& dispatch) {
    const CostBreakdown& c = dispatch.cost;
    Table t{{"item", "value"}, {}};
    const std::pair<const char*, double> items[] = {
        {"total", c.total},
        {"energy", c.energy},
        {"peak_load", c.peak},
        {"om", c.om},
        {"degradation", c.degradation_pwl},
        {"degradation_exact", c.degradation_exact},
        {"calendar", c.calendar},
        {"peak_mw", dispatch.peak_mw},
        {"balance_residual", dispatch.balance_residual},
        {"soc_residual", dispatch.soc_residual},
        {"lp_iterations", static_cast<double>(dispatch.lp_iterations)},
    };
    for (const auto& [name, value] : items) t.rows.push_back({std::string(name), value});
    return t;
}

Table trajectory_table(const SimulationResult& result) {
    Table t{{"day", "loss", "throughput_ah", "capacity", "resistance", "battery_efficiency"}, {}};
    for (const AgingState& s : result.trajectory) {
        t.rows.push_back(
            {s.days, s.loss, s.throughput, s.c_star, s.r_star, s.battery_efficiency});
    }
    return t;
}

}  // namespace pshave::io
