#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pshave/lifecost.hpp"
#include "pshave/lp.hpp"
#include "pshave/operation.hpp"
#include "pshave/scrapping.hpp"

namespace pshave {

/// Everything a study run needs. io::load_config fills it from a file.
struct StudyConfig {
    StorageUnit storage{};
    Tariff tariff{};
    DayProfile profile{};
    std::string profile_path;

    double c_end = 0.8;
    int inverter_passes = 1;
    int segments = 8;
    Spacing spacing = Spacing::kUniform;
    SocBoundary soc = SocBoundary::kCyclic;
    lp::SolveOptions solver{};

    int max_sim_days = 20000;
    int resolve_interval = 1;
};

enum class Scenario { kNoStorage = 1, kIgnoreDegradation = 2, kCapacityCriterion = 3, kEfficiencyCriterion = 4 };

const char* scenario_label(Scenario s);

/// Capacity criterion (c_end) for Scenarios 2/3, efficiency criterion from the
/// tariff for Scenario 4. The efficiency model treats unreachable DODs as
/// immortal so realized shallow cycles cost nothing.
LifeModel capacity_life(const StudyConfig& config);
LifeModel efficiency_life(const StudyConfig& config);

/// The day problem each scenario optimizes.
DayProblem scenario_problem(const StudyConfig& config, Scenario scenario);

/// 1 / (sum_t f_cycle(0.5, d_t) + f_cal) in days. Throws kImmortalBattery when
/// the denominator is zero.
double estimate_lifetime(const DispatchResult& dispatch, const LifeModel& life,
                         const StorageUnit& storage, std::size_t battery = 0);

/// Lifetime from explicit per-interval DODs.
double estimate_lifetime(std::span<const double> dods, const LifeModel& life,
                         const StorageUnit& storage);

enum class BenefitConvention {
    kGross,  ///< (J0 - Jday) * T
    kNet,    ///< (J0 - Jday) * T - investment
};

const char* to_string(BenefitConvention c);

double lifetime_benefit(double j0, double jday, double lifetime_days, BenefitConvention convention,
                        double investment);

/// Mean of the DODs above `threshold`; 0 when none are.
double mean_nonzero_dod(std::span<const double> dods, double threshold = 1e-3);

struct ScenarioRow {
    Scenario scenario = Scenario::kNoStorage;
    bool ok = false;
    std::string error;

    double daily_total = 0.0;
    double daily_energy = 0.0;
    double daily_om = 0.0;
    double daily_degradation = 0.0;
    double daily_degradation_exact = 0.0;
    double daily_peak_cost = 0.0;
    double peak_mw = 0.0;

    // Not applicable (NaN) for Scenario 1.
    double daily_benefit = 0.0;
    double lifetime_days = 0.0;
    double lifetime_benefit = 0.0;
    double lifetime_benefit_gross = 0.0;
    double lifetime_benefit_net = 0.0;
    BenefitConvention convention = BenefitConvention::kGross;
    double mean_nonzero_dod = 0.0;

    std::optional<DispatchResult> dispatch;
};

struct ScenarioReport {
    double j0 = 0.0;
    std::array<ScenarioRow, 4> rows{};

    const ScenarioRow& row(Scenario s) const { return rows[static_cast<std::size_t>(s) - 1]; }
};

/// Solves the four scenarios; a failing scenario is reported in its row
/// rather than aborting the report.
ScenarioReport run_four_scenarios(const StudyConfig& config,
                                  const lp::Backend& backend = lp::default_backend());

struct AgingState {
    double days = 0.0;
    double loss = 0.0;          ///< accumulated loss rate
    double throughput = 0.0;    ///< cumulative charge throughput, Ah per cell
    double c_star = 1.0;
    double r_star = 1.0;
    double battery_efficiency = 1.0;
};

/// Folds one day of per-interval DODs into the aging state: the current
/// capacity is converted to equivalent throughput at the day's
/// energy-weighted mean DOD, the day's throughput is added and C*, R* are
/// re-evaluated there.
AgingState fold_day(const AgingState& state, std::span<const double> dods,
                    const DegradationCoeffs& coeffs, double c_st);

enum class Termination { kLossExhausted, kCriterionThreshold };

struct SimulationResult {
    double days = 0.0;  ///< interpolated inside the last day when loss runs out
    Termination reason = Termination::kLossExhausted;
    std::vector<AgingState> trajectory;
};

using DayPlanner = std::function<DispatchResult(const StorageUnit& effective, const AgingState&)>;

struct SimulationOptions {
    bool feedback = true;
    int max_days = 20000;
    int resolve_interval = 1;
    /// Replaces the optimizer, e.g. with a forced cycling pattern.
    DayPlanner planner;
};

/// Storage parameters derated to the aged state: usable capacity scales with
/// C*, charge/discharge efficiencies with the battery-only round trip.
StorageUnit derate(const StorageUnit& nominal, const AgingState& state);

/// Day-by-day operation until accumulated loss reaches 1 or the criterion's
/// own threshold (C* <= c_end, or C*R* >= target) is crossed. Throws
/// kNoConvergence after max_days.
SimulationResult simulate_to_eol(const StudyConfig& config, const LifeModel& life,
                                 const SimulationOptions& options = {},
                                 const lp::Backend& backend = lp::default_backend());

}  // namespace pshave
