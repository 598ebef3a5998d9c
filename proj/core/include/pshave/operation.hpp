#pragma once

#include <optional>
#include <vector>

#include "pshave/lifecost.hpp"
#include "pshave/lp.hpp"
#include "pshave/scrapping.hpp"
#include "pshave/tariff.hpp"

namespace pshave {

/// One operating day: M intervals of dt hours, M * dt = 24.
struct DayProfile {
    double dt = 1.0;
    std::vector<double> load;  ///< MW
    std::vector<double> pv;    ///< day-ahead PV prediction, MW

    std::size_t intervals() const { return load.size(); }
    bool operator==(const DayProfile&) const = default;
};

void validate(const DayProfile& profile);

enum class SocBoundary {
    kCyclic,        ///< end-of-day SOC equals start-of-day SOC
    kFixedInitial,  ///< start-of-day SOC pinned, end free
};

struct DispatchFlags {
    /// false: Scenario 2 semantics, degradation epigraph and calendar cost are
    /// dropped from the objective (the DOD is still measured).
    bool degradation_in_objective = true;
    SocBoundary soc = SocBoundary::kCyclic;
    double initial_soc_fraction = 0.5;
};

/// A battery together with the cost curve it is dispatched against and the
/// life model used to re-evaluate degradation exactly after the solve.
struct BatteryPlan {
    StorageUnit storage;
    PwlCurve pwl = PwlCurve::zero();
    std::optional<LifeModel> life;
};

struct DayProblem {
    DayProfile profile;
    Tariff tariff;
    std::vector<BatteryPlan> batteries;
    DispatchFlags flags;
};

/// Column indices of the assembled program; -1 where a variable is absent.
struct BatteryColumns {
    std::vector<int> discharge, charge, soc, dod, epigraph;
};

struct DayLp {
    lp::LinearProgram program;
    std::vector<int> grid;
    std::vector<int> pv;
    std::vector<BatteryColumns> batteries;
    int peak = -1;
};

DayLp build_day_lp(const DayProblem& problem);

struct BatteryTrace {
    std::vector<double> discharge;  ///< grid-side MW
    std::vector<double> charge;     ///< grid-side MW
    std::vector<double> net;        ///< cell-side net outflow P^b, MW
    std::vector<double> soc;        ///< MWh at the end of each interval
    std::vector<double> dod;        ///< |P^b| dt / C^b
    std::vector<double> dod_lp;     ///< epigraph DOD variable
    double degradation_pwl = 0.0;
    double degradation_exact = 0.0;
    double calendar = 0.0;
};

struct CostBreakdown {
    double energy = 0.0;
    double peak = 0.0;
    double om = 0.0;
    double degradation_pwl = 0.0;    ///< epigraph value incl. calendar, 0 when not in objective
    double degradation_exact = 0.0;  ///< nonlinear re-evaluation incl. calendar
    double calendar = 0.0;
    double total = 0.0;              ///< J^day
};

struct DispatchResult {
    std::vector<double> grid;
    std::vector<double> pv_used;
    std::vector<BatteryTrace> batteries;
    double peak_mw = 0.0;
    CostBreakdown cost;
    double dt = 1.0;

    double balance_residual = 0.0;
    double soc_residual = 0.0;
    double peak_gap = 0.0;           ///< |L^pk - max_t P^g|
    int simultaneous_intervals = 0;  ///< intervals with both charge and discharge > 1e-6
    int lp_iterations = 0;
};

/// Throws Error(kSolverStatus) unless the solution is optimal.
DispatchResult extract(const lp::LPSolution& solution, const DayLp& day, const DayProblem& problem);

DispatchResult optimize_day(const DayProblem& problem,
                            const lp::Backend& backend = lp::default_backend(),
                            const lp::SolveOptions& options = {});

/// J^0: cost of the day with no storage.
double baseline_cost(const DayProfile& profile, const Tariff& tariff,
                     const lp::Backend& backend = lp::default_backend());

}  // namespace pshave
