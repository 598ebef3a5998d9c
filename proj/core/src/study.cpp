#include "pshave/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pshave/error.hpp"

namespace pshave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double threshold_product(const LifeModel& life) {
    if (const auto* eff = std::get_if<EfficiencyBased>(&life.criterion)) {
        return eff->threshold.target_product;
    }
    return kNaN;
}

bool criterion_crossed(const LifeModel& life, const AgingState& s) {
    if (const auto* cap = std::get_if<CapacityBased>(&life.criterion)) {
        return s.c_star <= cap->c_end;
    }
    if (std::holds_alternative<EfficiencyBased>(life.criterion)) {
        return s.c_star * s.r_star >= threshold_product(life);
    }
    return false;
}

}  // namespace

const char* scenario_label(Scenario s) {
    switch (s) {
        case Scenario::kNoStorage: return "S1";
        case Scenario::kIgnoreDegradation: return "S2";
        case Scenario::kCapacityCriterion: return "S3";
        case Scenario::kEfficiencyCriterion: return "S4";
    }
    return "S?";
}

const char* to_string(BenefitConvention c) {
    return c == BenefitConvention::kGross ? "gross" : "net";
}

LifeModel capacity_life(const StudyConfig& config) {
    return LifeModel::for_cell(config.storage.cell, CapacityBased{config.c_end});
}

LifeModel efficiency_life(const StudyConfig& config) {
    const ScrapThreshold th = clr_limit(config.tariff, config.storage.cell, config.inverter_passes);
    return LifeModel::for_cell(config.storage.cell, EfficiencyBased{th},
                               UnreachablePolicy::kImmortal);
}

DayProblem scenario_problem(const StudyConfig& config, Scenario scenario) {
    DayProblem problem;
    problem.profile = config.profile;
    problem.tariff = config.tariff;
    problem.flags.soc = config.soc;
    if (scenario == Scenario::kNoStorage) {
        return problem;
    }
    BatteryPlan plan;
    plan.storage = config.storage;
    switch (scenario) {
        case Scenario::kIgnoreDegradation:
            problem.flags.degradation_in_objective = false;
            plan.life = capacity_life(config);
            break;
        case Scenario::kCapacityCriterion:
            plan.life = capacity_life(config);
            plan.pwl = default_pwl(*plan.life, plan.storage, config.segments, config.spacing);
            break;
        case Scenario::kEfficiencyCriterion:
            plan.life = efficiency_life(config);
            plan.pwl = default_pwl(*plan.life, plan.storage, config.segments, config.spacing);
            break;
        case Scenario::kNoStorage:
            break;
    }
    problem.batteries.push_back(std::move(plan));
    return problem;
}

double estimate_lifetime(std::span<const double> dods, const LifeModel& life,
                         const StorageUnit& storage) {
    double rate = calendar_cost(storage).rate;
    for (double d : dods) rate += cycle_loss_rate(0.5, d, life);
    if (!(rate > 0.0)) {
        throw Error(ErrorCode::kImmortalBattery,
                    "no cycling loss and no calendar aging: lifetime is unbounded");
    }
    return 1.0 / rate;
}

double estimate_lifetime(const DispatchResult& dispatch, const LifeModel& life,
                         const StorageUnit& storage, std::size_t battery) {
    return estimate_lifetime(dispatch.batteries.at(battery).dod, life, storage);
}

double lifetime_benefit(double j0, double jday, double lifetime_days, BenefitConvention convention,
                        double investment) {
    if (!(lifetime_days > 0.0)) {
        throw Error(ErrorCode::kValidation, "lifetime must be positive");
    }
    const double gross = (j0 - jday) * lifetime_days;
    return convention == BenefitConvention::kGross ? gross : gross - investment;
}

double mean_nonzero_dod(std::span<const double> dods, double threshold) {
    double sum = 0.0;
    int count = 0;
    for (double d : dods) {
        if (d > threshold) {
            sum += d;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / count;
}

ScenarioReport run_four_scenarios(const StudyConfig& config, const lp::Backend& backend) {
    ScenarioReport report;
    bool have_baseline = false;
    for (std::size_t idx = 0; idx < report.rows.size(); ++idx) {
        const auto scenario = static_cast<Scenario>(idx + 1);
        ScenarioRow& row = report.rows[idx];
        row.scenario = scenario;
        row.daily_benefit = row.lifetime_days = row.lifetime_benefit = kNaN;
        row.lifetime_benefit_gross = row.lifetime_benefit_net = kNaN;
        row.convention = scenario == Scenario::kIgnoreDegradation ? BenefitConvention::kNet
                                                                   : BenefitConvention::kGross;
        try {
            const DayProblem problem = scenario_problem(config, scenario);
            DispatchResult dispatch = optimize_day(problem, backend, config.solver);
            row.daily_total = dispatch.cost.total;
            row.daily_energy = dispatch.cost.energy;
            row.daily_om = dispatch.cost.om;
            row.daily_degradation = dispatch.cost.degradation_pwl;
            row.daily_degradation_exact = dispatch.cost.degradation_exact;
            row.daily_peak_cost = dispatch.cost.peak;
            row.peak_mw = dispatch.peak_mw;
            if (scenario == Scenario::kNoStorage) {
                report.j0 = dispatch.cost.total;
                have_baseline = true;
            } else {
                const BatteryPlan& plan = problem.batteries.front();
                const BatteryTrace& trace = dispatch.batteries.front();
                row.mean_nonzero_dod = mean_nonzero_dod(trace.dod);
                row.lifetime_days = estimate_lifetime(trace.dod, *plan.life, plan.storage);
                if (have_baseline) {
                    const double invest = plan.storage.total_investment();
                    row.daily_benefit = report.j0 - row.daily_total;
                    row.lifetime_benefit_gross =
                        lifetime_benefit(report.j0, row.daily_total, row.lifetime_days,
                                         BenefitConvention::kGross, invest);
                    row.lifetime_benefit_net =
                        lifetime_benefit(report.j0, row.daily_total, row.lifetime_days,
                                         BenefitConvention::kNet, invest);
                    row.lifetime_benefit = row.convention == BenefitConvention::kGross
                                               ? row.lifetime_benefit_gross
                                               : row.lifetime_benefit_net;
                }
            }
            row.dispatch = std::move(dispatch);
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.error = std::string(to_string(e.code())) + ": " + e.what();
        }
    }
    return report;
}

AgingState fold_day(const AgingState& state, std::span<const double> dods,
                    const DegradationCoeffs& coeffs, double c_st) {
    AgingState next = state;
    double sum_d = 0.0;
    double sum_d2 = 0.0;
    for (double d : dods) {
        sum_d += d;
        sum_d2 += d * d;
    }
    if (sum_d <= 0.0) {
        return next;
    }
    const double mean_d = sum_d2 / sum_d;
    const double day_q = throughput_from_cycles(0.5, sum_d, c_st);
    const double fade = std::max(0.0, 1.0 - state.c_star);
    const double root = fade / coeffs.beta(mean_d);
    const double q_eq = root * root + day_q;
    next.throughput = state.throughput + day_q;
    next.c_star = capacity_fade(q_eq, mean_d, coeffs);
    next.r_star = resistance_growth(q_eq, mean_d, coeffs);
    return next;
}

StorageUnit derate(const StorageUnit& nominal, const AgingState& state) {
    StorageUnit eff = nominal;
    const CellParams& cell = nominal.cell;
    const double fresh = battery_efficiency(cell.c0 * cell.r0, cell);
    const double now = std::max(state.battery_efficiency, 1e-6);
    const double scale = std::sqrt(now / fresh);
    eff.eta_dis = std::clamp(nominal.eta_dis * scale, 1e-6, 1.0);
    eff.eta_cha = std::clamp(nominal.eta_cha * scale, 1e-6, 1.0);
    eff.e_cap = nominal.e_cap * std::clamp(state.c_star, 1e-6, 1.0);
    return eff;
}

SimulationResult simulate_to_eol(const StudyConfig& config, const LifeModel& life,
                                 const SimulationOptions& options, const lp::Backend& backend) {
    if (life.ignores_degradation()) {
        throw Error(ErrorCode::kValidation, "simulate_to_eol needs a scrapping criterion");
    }
    const StorageUnit& nominal = config.storage;
    const CellParams& cell = nominal.cell;
    const double f_cal = calendar_cost(nominal).rate;

    DayPlanner planner = options.planner;
    if (!planner) {
        BatteryPlan plan;
        plan.storage = nominal;
        plan.life = life;
        plan.pwl = default_pwl(life, nominal, config.segments, config.spacing);
        DayProblem base;
        base.profile = config.profile;
        base.tariff = config.tariff;
        base.flags.soc = config.soc;
        base.batteries.push_back(plan);
        planner = [base, backend, solver = config.solver](const StorageUnit& effective,
                                                          const AgingState&) {
            DayProblem problem = base;
            problem.batteries.front().storage = effective;
            return optimize_day(problem, backend, solver);
        };
    }

    SimulationResult out;
    AgingState state;
    state.battery_efficiency = battery_efficiency(cell.c0 * cell.r0, cell);
    out.trajectory.push_back(state);

    StorageUnit effective = nominal;
    std::optional<DispatchResult> dispatch;
    const int interval = std::max(1, options.resolve_interval);
    for (int day = 1; day <= options.max_days; ++day) {
        const bool refresh = !dispatch || (options.feedback && (day - 1) % interval == 0);
        if (refresh) {
            dispatch = planner(effective, state);
        }
        const std::vector<double>& dods = dispatch->batteries.front().dod;

        double day_loss = f_cal;
        for (double d : dods) day_loss += cycle_loss_rate(0.5, d, life);

        AgingState next = fold_day(state, dods, life.coeffs, life.c_st);
        next.days = day;
        next.battery_efficiency =
            battery_efficiency(cell.c0 * cell.r0 * next.c_star * next.r_star, cell);

        if (state.loss + day_loss >= 1.0 - 1e-12) {
            const double frac = day_loss > 0.0 ? (1.0 - state.loss) / day_loss : 1.0;
            next.loss = 1.0;
            out.trajectory.push_back(next);
            out.days = (day - 1) + std::clamp(frac, 0.0, 1.0);
            out.reason = Termination::kLossExhausted;
            return out;
        }
        next.loss = state.loss + day_loss;
        out.trajectory.push_back(next);
        state = next;
        if (criterion_crossed(life, state)) {
            out.days = day;
            out.reason = Termination::kCriterionThreshold;
            return out;
        }
        if (options.feedback) {
            effective = derate(nominal, state);
        }
    }
    throw Error(ErrorCode::kNoConvergence,
                "battery did not reach end of life within " + std::to_string(options.max_days) +
                    " days");
}

}  // namespace pshave
