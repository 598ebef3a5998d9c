#include <gtest/gtest.h>

#include <cmath>

#include "pshave/error.hpp"
#include "pshave/io.hpp"
#include "pshave/lifecost.hpp"
#include "pshave/operation.hpp"

using namespace pshave;

namespace {

BatteryPlan capacity_plan(int segments = 8) {
    BatteryPlan plan;
    plan.life = LifeModel::for_cell(CellParams{}, CapacityBased{0.8});
    plan.pwl = default_pwl(*plan.life, plan.storage, segments);
    return plan;
}

DayProblem bundled_problem(int segments = 8) {
    DayProblem p;
    p.profile = io::bundled_profile();
    p.tariff = Tariff::jiangsu();
    p.batteries.push_back(capacity_plan(segments));
    return p;
}

}  // namespace

TEST(DayLp, SizeForEightSegments) {
    const DayLp day = build_day_lp(bundled_problem(8));
    // Per hour: Pg, Pr, Pdis, Pcha, S, d, z; plus the peak variable.
    EXPECT_EQ(day.program.num_variables(), 24 * 7 + 1);
    // Per hour: balance, SOC, two |d| rows, eight epigraph rows, one peak row.
    EXPECT_EQ(day.program.num_constraints(), 24 * (1 + 1 + 2 + 8 + 1));
}

TEST(DayLp, NoEpigraphWithoutDegradation) {
    DayProblem p = bundled_problem();
    p.flags.degradation_in_objective = false;
    const DayLp day = build_day_lp(p);
    EXPECT_EQ(day.program.num_variables(), 24 * 6 + 1);
    EXPECT_EQ(day.batteries[0].epigraph[0], -1);
    EXPECT_EQ(day.program.objective_offset(), 0.0);
}

TEST(Dispatch, FeasibleAndStructured) {
    for (int k : {1, 4, 8, 16}) {
        const DispatchResult r = optimize_day(bundled_problem(k));
        EXPECT_LE(r.balance_residual, 1e-6) << k;
        EXPECT_LE(r.soc_residual, 1e-6) << k;
        EXPECT_LE(r.peak_gap, 1e-6) << k;
        EXPECT_EQ(r.simultaneous_intervals, 0) << k;
        const BatteryTrace& b = r.batteries[0];
        for (std::size_t t = 0; t < 24; ++t) {
            EXPECT_GE(b.soc[t], -1e-9);
            EXPECT_LE(b.soc[t], 4.0 + 1e-9);
            EXPECT_LE(b.discharge[t], 4.0 + 1e-9);
            EXPECT_LE(b.charge[t], 4.0 + 1e-9);
            EXPECT_NEAR(b.dod[t], std::abs(b.net[t]) / 4.0, 1e-12);
            EXPECT_GE(b.dod_lp[t], b.dod[t] - 1e-7);
        }
    }
}

TEST(Dispatch, PwlCostBoundsExactCost) {
    const DispatchResult r = optimize_day(bundled_problem());
    EXPECT_GE(r.cost.degradation_pwl, r.cost.degradation_exact - 1e-6);
    EXPECT_NEAR(r.cost.total, r.cost.energy + r.cost.peak + r.cost.om + r.cost.degradation_pwl,
                1e-6);
}

TEST(Baseline, PeakCostProration) {
    DayProblem p;
    p.profile = io::bundled_profile();
    p.tariff = Tariff::jiangsu();
    const DispatchResult r = optimize_day(p);
    EXPECT_NEAR(r.peak_mw, 7.66, 1e-9);
    EXPECT_NEAR(r.cost.peak, 7660.0 * 10.0 / 30.0, 1.0);
    EXPECT_NEAR(baseline_cost(p.profile, p.tariff), r.cost.total, 1e-9);
}

TEST(Dispatch, TwoPeriodToyMatchesHandOptimum) {
    DayProblem p;
    p.profile.dt = 12.0;
    p.profile.load = {5.0, 5.0};
    p.profile.pv = {0.0, 0.0};
    p.tariff = Tariff::jiangsu();
    p.tariff.peak_capacity_price = 0.0;
    p.tariff.om_cost = 0.0;
    p.flags.degradation_in_objective = false;
    p.batteries.push_back(BatteryPlan{});
    const DispatchResult r = optimize_day(p);
    // Hours 0-12 are priced at the valley rate, 12-24 at the normal rate.
    // Fill the 4 MWh cell in the first half, empty it in the second.
    const double charge = 4.0 / (12.0 * 0.89);
    const double discharge = 4.0 * 0.89 / 12.0;
    const double hand = 1000.0 * 12.0 * (0.05 * (5.0 + charge) + 0.092 * (5.0 - discharge));
    EXPECT_NEAR(r.cost.total, hand, 1e-6);
    EXPECT_NEAR(r.batteries[0].charge[0], charge, 1e-9);
    EXPECT_NEAR(r.batteries[0].discharge[1], discharge, 1e-9);
}

TEST(Dispatch, ZeroPowerCollapsesToBaseline) {
    DayProblem p = bundled_problem();
    p.batteries[0].storage.p_cha_max = 0.0;
    p.batteries[0].storage.p_dis_max = 0.0;
    p.flags.degradation_in_objective = false;
    const DispatchResult r = optimize_day(p);
    EXPECT_NEAR(r.cost.total, baseline_cost(p.profile, p.tariff), 1e-6);
}

TEST(Dispatch, FixedInitialSoc) {
    DayProblem p = bundled_problem();
    p.flags.soc = SocBoundary::kFixedInitial;
    p.flags.initial_soc_fraction = 0.5;
    const DispatchResult r = optimize_day(p);
    EXPECT_LE(r.soc_residual, 1e-6);
    // A free end state can only help.
    EXPECT_LE(r.cost.total, optimize_day(bundled_problem()).cost.total + 1e-6);
}

TEST(Dispatch, StorageNeverIncreasesCost) {
    const double j0 = baseline_cost(io::bundled_profile(), Tariff::jiangsu());
    EXPECT_LE(optimize_day(bundled_problem()).cost.total, j0 + 1e-6);
}

TEST(Dispatch, TwoBatteries) {
    DayProblem p = bundled_problem();
    p.batteries.push_back(capacity_plan());
    const DispatchResult r = optimize_day(p);
    EXPECT_EQ(r.batteries.size(), 2u);
    EXPECT_LE(r.balance_residual, 1e-6);
    EXPECT_LE(r.cost.total, optimize_day(bundled_problem()).cost.total + 1e-6);
}

TEST(Profile, Validation) {
    DayProfile p = io::bundled_profile();
    p.load.pop_back();
    EXPECT_THROW(validate(p), Error);
    p = io::bundled_profile();
    p.dt = 0.5;
    EXPECT_THROW(validate(p), Error);
    p = io::bundled_profile();
    p.pv[3] = -1.0;
    EXPECT_THROW(validate(p), Error);
}

TEST(Extract, NonOptimalStatusThrows) {
    const DayProblem p = bundled_problem();
    const DayLp day = build_day_lp(p);
    lp::LPSolution s;
    s.status = lp::Status::kInfeasible;
    try {
        extract(s, day, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kSolverStatus);
    }
}
