#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pshave/error.hpp"
#include "pshave/format.hpp"
#include "pshave/io.hpp"
#include "pshave/lifecost.hpp"
#include "pshave/operation.hpp"
#include "pshave/scrapping.hpp"
#include "pshave/study.hpp"

namespace pshave::cli {

namespace {

struct CommonOptions {
    std::string config = "default";
    std::string profile;
    std::string criterion = "capacity";
    std::optional<int> segments;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
};

struct CurvesOptions {
    std::string kind = "all";
    int max_cycles = 2000;
    int step = 50;
};

struct SimulateOptions {
    bool no_feedback = false;
    std::optional<int> max_days;
    std::string trajectory_out;
};

struct OptimizeOptions {
    std::string dispatch_out;
};

/// Parsed --criterion value. c_end is only meaningful for kCapacity.
struct CriterionChoice {
    enum Kind { kCapacity, kEfficiency, kNone } kind = kCapacity;
    double c_end = 0.8;
};

CriterionChoice parse_criterion(const std::string& text, double default_c_end) {
    CriterionChoice c;
    c.c_end = default_c_end;
    if (text == "efficiency") {
        c.kind = CriterionChoice::kEfficiency;
    } else if (text == "none") {
        c.kind = CriterionChoice::kNone;
    } else if (text == "capacity") {
        c.kind = CriterionChoice::kCapacity;
    } else if (text.rfind("capacity:", 0) == 0) {
        const std::string value = text.substr(9);
        std::size_t used = 0;
        try {
            c.c_end = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw Error(ErrorCode::kValidation, "criterion capacity:<c_end> needs a number");
        }
        validate(CapacityBased{c.c_end});
    } else {
        throw Error(ErrorCode::kValidation,
                    "criterion must be capacity[:<c_end>], efficiency or none");
    }
    return c;
}

LifeModel life_for(const CriterionChoice& choice, StudyConfig& config) {
    switch (choice.kind) {
        case CriterionChoice::kCapacity:
            config.c_end = choice.c_end;
            return capacity_life(config);
        case CriterionChoice::kEfficiency:
            return efficiency_life(config);
        case CriterionChoice::kNone:
            break;
    }
    return LifeModel::for_cell(config.storage.cell, NoneIgnored{});
}

StudyConfig resolve_config(const CommonOptions& opt) {
    StudyConfig config = io::load_config(opt.config);
    if (opt.profile == "random") {
        config.profile = io::random_profile(opt.seed);
        config.profile_path = "random:" + std::to_string(opt.seed);
    } else if (!opt.profile.empty()) {
        config.profile = io::load_profile(opt.profile);
        config.profile_path = opt.profile;
    }
    if (opt.segments) {
        if (*opt.segments < 1 || *opt.segments > 64) {
            throw Error(ErrorCode::kValidation, "segments must lie in [1, 64]");
        }
        config.segments = *opt.segments;
    }
    return config;
}

/// Writes to --out when given, otherwise to the command's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw Error(ErrorCode::kValidation, "cannot write '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void write_file(const std::filesystem::path& path, const io::Table& table, io::Format format) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::kValidation, "cannot write '" + path.string() + "'");
    io::write_table(f, table, format);
}

// Subcommands ------------------------------------------------------------------

int cmd_threshold(const CommonOptions& opt, std::ostream& out) {
    const StudyConfig config = resolve_config(opt);
    const CellParams& cell = config.storage.cell;
    const ScrapThreshold one = clr_limit(config.tariff, cell, 1);
    const ScrapThreshold two = clr_limit(config.tariff, cell, 2);
    const double active = static_cast<double>(config.inverter_passes);

    io::Table t{{"quantity", "value", "note"}, {}};
    auto add = [&](const char* name, double value, const char* note) {
        t.rows.push_back({std::string(name), value, std::string(note)});
    };
    add("threshold_total", one.ratio_total, "(valley + om) / (peak - om)");
    add("active_inverter_passes", active, "passes used by the efficiency criterion");
    add("y_1pass", one.y, "inverter applied once");
    add("clr_limit_1pass", one.clr_limit, "V");
    add("target_product_1pass", one.target_product, "clr_limit / (c0 r0)");
    add("battery_scrap_efficiency_1pass", scrap_battery_efficiency(config.tariff, cell, 1),
        "threshold / eta_inv");
    add("y_2pass", two.y, "inverter applied on charge and discharge");
    add("clr_limit_2pass", two.clr_limit, "V");
    add("target_product_2pass", two.target_product, "clr_limit / (c0 r0)");
    add("battery_scrap_efficiency_2pass", scrap_battery_efficiency(config.tariff, cell, 2),
        "threshold / eta_inv^2; the reference system reports 0.616, the gap comes from the "
        "inverter reading");
    Sink sink(opt.out, out);
    io::write_table(sink.get(), t, io::parse_format(opt.format));
    return kExitOk;
}

int cmd_maxcycles(const CommonOptions& opt, double dod_step, std::ostream& out) {
    StudyConfig config = resolve_config(opt);
    const CriterionChoice choice = parse_criterion(opt.criterion, config.c_end);
    const std::vector<double> dods = io::grid(dod_step, 1.0, dod_step);
    const CellParams& cell = config.storage.cell;
    io::Table t;
    if (choice.kind == CriterionChoice::kCapacity) {
        t = io::max_cycles_capacity_table(cell, {choice.c_end}, dods);
    } else if (choice.kind == CriterionChoice::kEfficiency) {
        const double eff = scrap_battery_efficiency(config.tariff, cell, config.inverter_passes);
        t = io::max_cycles_efficiency_table(cell, {eff}, dods);
    } else {
        throw Error(ErrorCode::kValidation, "maxcycles needs a capacity or efficiency criterion");
    }
    Sink sink(opt.out, out);
    io::write_table(sink.get(), t, io::parse_format(opt.format));
    return kExitOk;
}

int cmd_curves(const CommonOptions& opt, const CurvesOptions& c, std::ostream& out) {
    StudyConfig config = resolve_config(opt);
    const CellParams& cell = config.storage.cell;
    const io::Format format = io::parse_format(opt.format);
    if (c.max_cycles < 0 || c.step < 1) {
        throw Error(ErrorCode::kValidation, "--max-cycles must be >= 0 and --step >= 1");
    }
    const std::vector<double> fig_dods{0.2, 0.4, 0.6, 0.8, 1.0};
    const std::vector<double> dod_grid = io::grid(0.05, 1.0, 0.05);
    const std::vector<double> scrap_effs{0.55, 0.6, 0.65, 0.7};
    const std::string ext = format == io::Format::kJson ? ".json" : ".csv";

    auto make = [&](const std::string& kind) -> io::Table {
        if (kind == "capacity") {
            return io::capacity_curve_table(cell, fig_dods, c.max_cycles, c.step);
        }
        if (kind == "efficiency") {
            return io::efficiency_curve_table(cell, fig_dods, c.max_cycles, c.step);
        }
        if (kind == "maxcycles-capacity") {
            return io::max_cycles_capacity_table(cell, {0.6, 0.7, 0.8, 0.9}, dod_grid);
        }
        if (kind == "maxcycles-efficiency") {
            return io::max_cycles_efficiency_table(cell, scrap_effs, dod_grid);
        }
        if (kind == "pwl") {
            const LifeModel life = life_for(parse_criterion(opt.criterion, config.c_end), config);
            return io::pwl_table(
                default_pwl(life, config.storage, config.segments, config.spacing));
        }
        throw Error(ErrorCode::kValidation, "unknown curve kind '" + kind + "'");
    };

    if (c.kind != "all") {
        Sink sink(opt.out, out);
        io::write_table(sink.get(), make(c.kind), format);
        return kExitOk;
    }
    if (opt.out.empty()) {
        throw Error(ErrorCode::kValidation, "--kind all needs --out <directory>");
    }
    const std::filesystem::path dir(opt.out);
    std::filesystem::create_directories(dir);
    for (const char* kind :
         {"capacity", "efficiency", "maxcycles-capacity", "maxcycles-efficiency", "pwl"}) {
        const std::filesystem::path path = dir / (std::string(kind) + ext);
        write_file(path, make(kind), format);
        out << path.string() << '\n';
    }
    return kExitOk;
}

int cmd_optimize(const CommonOptions& opt, const OptimizeOptions& o, std::ostream& out) {
    StudyConfig config = resolve_config(opt);
    const CriterionChoice choice = parse_criterion(opt.criterion, config.c_end);
    const LifeModel life = life_for(choice, config);

    DayProblem problem;
    problem.profile = config.profile;
    problem.tariff = config.tariff;
    problem.flags.soc = config.soc;
    BatteryPlan plan;
    plan.storage = config.storage;
    plan.life = life;
    if (life.ignores_degradation()) {
        problem.flags.degradation_in_objective = false;
    } else {
        plan.pwl = default_pwl(life, config.storage, config.segments, config.spacing);
    }
    problem.batteries.push_back(plan);

    const DispatchResult result = optimize_day(problem, lp::default_backend(), config.solver);
    const io::Format format = io::parse_format(opt.format);
    Sink sink(opt.out, out);
    io::write_table(sink.get(), io::cost_table(result), format);
    if (!o.dispatch_out.empty()) {
        write_file(o.dispatch_out, io::dispatch_table(config.profile, result), format);
    }
    return kExitOk;
}

int cmd_scenarios(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    const StudyConfig config = resolve_config(opt);
    const ScenarioReport report = run_four_scenarios(config);
    Sink sink(opt.out, out);
    io::write_table(sink.get(), io::report_table(report), io::parse_format(opt.format));
    int code = kExitOk;
    for (const ScenarioRow& row : report.rows) {
        if (!row.ok) {
            err << "error[Scenario]: " << scenario_label(row.scenario) << " failed: " << row.error
                << '\n';
            code = kExitModel;
        }
    }
    return code;
}

int cmd_simulate(const CommonOptions& opt, const SimulateOptions& s, std::ostream& out) {
    StudyConfig config = resolve_config(opt);
    const CriterionChoice choice = parse_criterion(opt.criterion, config.c_end);
    if (choice.kind == CriterionChoice::kNone) {
        throw Error(ErrorCode::kValidation, "simulate needs a capacity or efficiency criterion");
    }
    const LifeModel life = life_for(choice, config);
    SimulationOptions sim;
    sim.feedback = !s.no_feedback;
    sim.max_days = s.max_days.value_or(config.max_sim_days);
    sim.resolve_interval = config.resolve_interval;
    const SimulationResult result = simulate_to_eol(config, life, sim);

    const io::Format format = io::parse_format(opt.format);
    const AgingState& last = result.trajectory.back();
    io::Table t{{"days", "termination", "capacity", "resistance", "battery_efficiency"},
                {{result.days,
                  std::string(result.reason == Termination::kLossExhausted ? "loss_exhausted"
                                                                           : "criterion_threshold"),
                  last.c_star, last.r_star, last.battery_efficiency}}};
    Sink sink(opt.out, out);
    io::write_table(sink.get(), t, format);
    if (!s.trajectory_out.empty()) {
        write_file(s.trajectory_out, io::trajectory_table(result), format);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Peak-shaving storage dispatch and battery scrapping-criterion study"};
    app.name("pshave");
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "JSON config file or 'default'");
        sub->add_option("--profile", common.profile, "profile CSV path or 'random'");
        sub->add_option("--criterion", common.criterion,
                        "capacity[:<c_end>] | efficiency | none");
        sub->add_option("--segments", common.segments, "PWL segments K_s");
        sub->add_option("--out", common.out, "output file (directory for curves --kind all)");
        sub->add_option("--format", common.format, "csv | json | table");
        sub->add_option("--seed", common.seed, "seed for --profile random");
    };

    CurvesOptions curves;
    auto* c_curves = app.add_subcommand("curves", "aging and cycle-life curve data");
    add_common(c_curves);
    c_curves->add_option("--kind", curves.kind,
                         "capacity | efficiency | maxcycles-capacity | maxcycles-efficiency | "
                         "pwl | all");
    c_curves->add_option("--max-cycles", curves.max_cycles, "cycle horizon of the aging curves");
    c_curves->add_option("--step", curves.step, "cycle step of the aging curves");

    auto* c_threshold = app.add_subcommand("threshold", "efficiency scrapping threshold");
    add_common(c_threshold);

    double dod_step = 0.1;
    auto* c_maxcycles = app.add_subcommand("maxcycles", "maximum cycle number over a DOD grid");
    add_common(c_maxcycles);
    c_maxcycles->add_option("--dod-step", dod_step, "DOD grid step");

    OptimizeOptions optimize;
    auto* c_optimize = app.add_subcommand("optimize", "single-day dispatch and cost breakdown");
    add_common(c_optimize);
    c_optimize->add_option("--dispatch-out", optimize.dispatch_out,
                           "write the interval schedule to this file");

    auto* c_scenarios = app.add_subcommand("scenarios", "four-scenario benefit report");
    add_common(c_scenarios);

    SimulateOptions simulate;
    auto* c_simulate = app.add_subcommand("simulate", "day-by-day operation to end of life");
    add_common(c_simulate);
    c_simulate->add_flag("--no-feedback", simulate.no_feedback,
                         "keep the fresh-battery dispatch for every day");
    c_simulate->add_option("--max-days", simulate.max_days, "iteration cap in days");
    c_simulate->add_option("--trajectory-out", simulate.trajectory_out,
                           "write the daily aging trajectory to this file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error[Usage]: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (c_curves->parsed()) return cmd_curves(common, curves, out);
        if (c_threshold->parsed()) return cmd_threshold(common, out);
        if (c_maxcycles->parsed()) return cmd_maxcycles(common, dod_step, out);
        if (c_optimize->parsed()) return cmd_optimize(common, optimize, out);
        if (c_scenarios->parsed()) return cmd_scenarios(common, out, err);
        if (c_simulate->parsed()) return cmd_simulate(common, simulate, out);
    } catch (const Error& e) {
        err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
        return is_input_error(e.code()) ? kExitInput : kExitModel;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error[Validation]: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

int run_cli(const std::vector<std::string>& args) {
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace pshave::cli
