#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pshave/error.hpp"
#include "pshave/lp.hpp"

using namespace pshave;
using namespace pshave::lp;

namespace {

// Two periods, one battery of 1 MWh / 1 MW, load 1 MW in both periods,
// prices 50 and 150. Charge/discharge efficiency eta on each side.
LinearProgram arbitrage_toy(double eta) {
    LinearProgram lp;
    const int g1 = lp.add_variable("g1", 0.0, kInf, 50.0);
    const int g2 = lp.add_variable("g2", 0.0, kInf, 150.0);
    const int c1 = lp.add_variable("c1", 0.0, 1.0);
    const int d1 = lp.add_variable("d1", 0.0, 1.0);
    const int c2 = lp.add_variable("c2", 0.0, 1.0);
    const int d2 = lp.add_variable("d2", 0.0, 1.0);
    const int s1 = lp.add_variable("s1", 0.0, 1.0);
    const int s2 = lp.add_variable("s2", 0.0, 1.0);
    lp.add_constraint({{g1, 1}, {d1, 1}, {c1, -1}}, Sense::kEqual, 1.0);
    lp.add_constraint({{g2, 1}, {d2, 1}, {c2, -1}}, Sense::kEqual, 1.0);
    lp.add_constraint({{s1, 1}, {s2, -1}, {c1, -eta}, {d1, 1.0 / eta}}, Sense::kEqual, 0.0);
    lp.add_constraint({{s2, 1}, {s1, -1}, {c2, -eta}, {d2, 1.0 / eta}}, Sense::kEqual, 0.0);
    return lp;
}

}  // namespace

TEST(Simplex, ArbitrageToyLossless) {
    const LPSolution s = solve(arbitrage_toy(1.0));
    ASSERT_EQ(s.status, Status::kOptimal);
    // Charge the full 1 MWh in the cheap period, serve the expensive load from it.
    EXPECT_NEAR(s.objective, 100.0, 1e-9);
    EXPECT_NEAR(s.values[0], 2.0, 1e-9);
    EXPECT_NEAR(s.values[1], 0.0, 1e-9);
}

TEST(Simplex, ArbitrageToyWithLosses) {
    const LPSolution s = solve(arbitrage_toy(0.9));
    ASSERT_EQ(s.status, Status::kOptimal);
    // 1 MWh in stores 0.9, of which 0.81 reaches the load.
    EXPECT_NEAR(s.objective, 2.0 * 50.0 + (1.0 - 0.81) * 150.0, 1e-9);
}

TEST(Simplex, RandomProgramsMatchVertexEnumeration) {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> nvars(2, 8);
    std::uniform_int_distribution<int> nrows(1, 8);
    int optimal = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const bool stress = trial % 5 == 4;
        const LinearProgram lp = oracle::random_program(rng, nvars(rng), nrows(rng), stress);
        const oracle::VertexResult ref = oracle::enumerate_vertices(lp);
        const LPSolution s = solve(lp);
        if (!ref.feasible) {
            EXPECT_EQ(s.status, Status::kInfeasible) << "trial " << trial;
            ++infeasible;
            continue;
        }
        ASSERT_EQ(s.status, Status::kOptimal) << "trial " << trial;
        EXPECT_NEAR(s.objective, ref.objective, 1e-6 * std::max(1.0, std::abs(ref.objective)))
            << "trial " << trial;
        EXPECT_LE(s.max_residual, kResidualBound);
        ++optimal;
    }
    EXPECT_GE(optimal, 20);
}

TEST(Simplex, StrongDualityOnRandomPrograms) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const LinearProgram lp = oracle::random_program(rng, 6, 5, false);
        const LPSolution s = solve(lp);
        if (s.status != Status::kOptimal) continue;
        const double dual = dual_objective(lp, s.duals);
        EXPECT_LE(dual, s.objective + 1e-7 * std::max(1.0, std::abs(s.objective)));
        EXPECT_NEAR(dual, s.objective, 1e-7 * std::max(1.0, std::abs(s.objective)));
    }
}

TEST(Simplex, Deterministic) {
    std::mt19937_64 rng(99);
    const LinearProgram lp = oracle::random_program(rng, 8, 8, false);
    const LPSolution a = solve(lp);
    const LPSolution b = solve(lp);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Simplex, DetectsUnbounded) {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, kInf, -1.0);
    const int y = lp.add_variable("y", 0.0, kInf, 0.0);
    lp.add_constraint({{x, 1}, {y, -1}}, Sense::kLessEqual, 1.0);
    EXPECT_EQ(solve(lp).status, Status::kUnbounded);
}

TEST(Simplex, DetectsInfeasible) {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, 1.0, 1.0);
    lp.add_constraint({{x, 1}}, Sense::kGreaterEqual, 2.0);
    EXPECT_EQ(solve(lp).status, Status::kInfeasible);
}

TEST(Simplex, FreeAndNegativeBoundedVariables) {
    LinearProgram lp;
    const int x = lp.add_variable("x", -kInf, kInf, 1.0);
    const int y = lp.add_variable("y", -3.0, -1.0, -2.0);
    lp.add_constraint({{x, 1}, {y, 1}}, Sense::kGreaterEqual, -5.0);
    const LPSolution s = solve(lp);
    ASSERT_EQ(s.status, Status::kOptimal);
    // y at -1 is worth 2 but forces x >= -4; y at -3 costs 2 more but lets x reach -2 only.
    EXPECT_NEAR(s.values[static_cast<std::size_t>(y)], -1.0, 1e-9);
    EXPECT_NEAR(s.values[static_cast<std::size_t>(x)], -4.0, 1e-9);
    EXPECT_NEAR(s.objective, -2.0, 1e-9);
}

TEST(Simplex, BealeCyclingExample) {
    LinearProgram lp;
    const int x4 = lp.add_variable("x4", 0.0, kInf, -0.75);
    const int x5 = lp.add_variable("x5", 0.0, kInf, 20.0);
    const int x6 = lp.add_variable("x6", 0.0, kInf, -0.5);
    const int x7 = lp.add_variable("x7", 0.0, kInf, 6.0);
    lp.add_constraint({{x4, 0.25}, {x5, -8}, {x6, -1}, {x7, 9}}, Sense::kLessEqual, 0.0);
    lp.add_constraint({{x4, 0.5}, {x5, -12}, {x6, -0.5}, {x7, 3}}, Sense::kLessEqual, 0.0);
    lp.add_constraint({{x6, 1}}, Sense::kLessEqual, 1.0);
    SolveOptions opt;
    opt.stall_limit = 0;  // Bland from the first degenerate pivot
    for (const SolveOptions& o : {SolveOptions{}, opt}) {
        const LPSolution s = solve(lp, o);
        ASSERT_EQ(s.status, Status::kOptimal);
        EXPECT_NEAR(s.objective, -1.25, 1e-9);
    }
}

TEST(Simplex, ObjectiveOffsetIsAdded) {
    LinearProgram lp = arbitrage_toy(1.0);
    lp.set_objective_offset(12.5);
    EXPECT_NEAR(solve(lp).objective, 112.5, 1e-9);
}

TEST(Simplex, IterationLimitReported) {
    std::mt19937_64 rng(3);
    const LinearProgram lp = oracle::random_program(rng, 8, 8, false);
    SolveOptions o;
    o.max_iterations = 1;
    const LPSolution s = solve(lp, o);
    EXPECT_TRUE(s.status == Status::kIterationLimit || s.status == Status::kOptimal);
}

TEST(Simplex, RejectsInvalidProgram) {
    LinearProgram lp;
    lp.add_variable("x", 2.0, 1.0, 0.0);
    EXPECT_THROW(solve(lp), Error);
    LinearProgram dangling;
    dangling.add_variable("x", 0.0, 1.0);
    dangling.add_constraint({{3, 1.0}}, Sense::kLessEqual, 1.0);
    EXPECT_THROW(dangling.validate(), Error);
}

TEST(Simplex, ResidualHelperMeasuresViolation) {
    const LinearProgram lp = arbitrage_toy(1.0);
    const LPSolution s = solve(lp);
    EXPECT_LE(max_residual(lp, s.values), 1e-12);
    std::vector<double> bad = s.values;
    bad[0] += 1.0;
    EXPECT_GT(max_residual(lp, bad), 0.1);
}

TEST(LpFormat, WritesSections) {
    LinearProgram lp = arbitrage_toy(1.0);
    lp.set_objective_offset(3.0);
    std::ostringstream os;
    write_lp_format(lp, os);
    const std::string text = os.str();
    for (const char* section : {"Minimize", "Subject To", "Bounds", "End", "\\ objective offset"}) {
        EXPECT_NE(text.find(section), std::string::npos) << section;
    }
}

TEST(Backend, DefaultBackendIsBundledSolver) {
    const LinearProgram lp = arbitrage_toy(0.9);
    const LPSolution a = default_backend()(lp, SolveOptions{});
    const LPSolution b = solve(lp);
    EXPECT_EQ(a.values, b.values);
}
