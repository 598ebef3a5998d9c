#include "pshave/operation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pshave/error.hpp"

namespace pshave {

namespace {

constexpr double kKiloPerMega = 1000.0;
constexpr double kSimultaneousTol = 1e-6;

std::string indexed(const char* stem, std::size_t i, std::size_t t) {
    return std::string(stem) + "_" + std::to_string(i) + "_" + std::to_string(t);
}

std::string indexed(const char* stem, std::size_t t) {
    return std::string(stem) + "_" + std::to_string(t);
}

}  // namespace

void validate(const DayProfile& profile) {
    if (profile.load.empty() || profile.load.size() != profile.pv.size()) {
        throw Error(ErrorCode::kValidation, "profile load and PV series must have equal length");
    }
    if (!(profile.dt > 0.0) ||
        std::abs(profile.dt * static_cast<double>(profile.load.size()) - 24.0) > 1e-9) {
        throw Error(ErrorCode::kValidation, "profile intervals must cover exactly 24 hours");
    }
    for (std::size_t t = 0; t < profile.load.size(); ++t) {
        if (!(profile.load[t] >= 0.0) || !(profile.pv[t] >= 0.0) ||
            !std::isfinite(profile.load[t]) || !std::isfinite(profile.pv[t])) {
            throw Error(ErrorCode::kValidation,
                        "profile values must be finite and non-negative (interval " +
                            std::to_string(t) + ")");
        }
    }
}

DayLp build_day_lp(const DayProblem& problem) {
    const DayProfile& prof = problem.profile;
    const Tariff& tariff = problem.tariff;
    validate(prof);
    validate(tariff);
    const std::size_t m = prof.intervals();
    const std::size_t k = problem.batteries.size();
    const double dt = prof.dt;
    const bool with_deg = problem.flags.degradation_in_objective;

    DayLp day;
    lp::LinearProgram& lp = day.program;
    day.grid.resize(m);
    day.pv.resize(m);
    day.batteries.resize(k);
    for (BatteryColumns& cols : day.batteries) {
        cols.discharge.assign(m, -1);
        cols.charge.assign(m, -1);
        cols.soc.assign(m, -1);
        cols.dod.assign(m, -1);
        cols.epigraph.assign(m, -1);
    }

    for (std::size_t t = 0; t < m; ++t) {
        const double price = tariff.price_at_hour(static_cast<double>(t) * dt);
        day.grid[t] = lp.add_variable(indexed("Pg", t), 0.0, lp::kInf, price * kKiloPerMega * dt);
        day.pv[t] = lp.add_variable(indexed("Pr", t), 0.0, prof.pv[t]);
        for (std::size_t i = 0; i < k; ++i) {
            const BatteryPlan& plan = problem.batteries[i];
            const StorageUnit& st = plan.storage;
            BatteryColumns& cols = day.batteries[i];
            const double om = tariff.om_cost * kKiloPerMega * dt;
            cols.discharge[t] = lp.add_variable(indexed("Pdis", i, t), 0.0, st.p_dis_max, om);
            cols.charge[t] = lp.add_variable(indexed("Pcha", i, t), 0.0, st.p_cha_max, om);
            cols.soc[t] = lp.add_variable(indexed("S", i, t), 0.0, st.e_cap);
            cols.dod[t] = lp.add_variable(indexed("d", i, t), 0.0, plan.pwl.d_max());
            if (with_deg) {
                cols.epigraph[t] = lp.add_variable(indexed("z", i, t), 0.0, lp::kInf, 1.0);
            }
        }
    }
    day.peak = lp.add_variable("Lpk", 0.0, lp::kInf,
                               tariff.daily_capacity_price() * kKiloPerMega);

    double offset = 0.0;
    for (const BatteryPlan& plan : problem.batteries) {
        validate(plan.storage);
        if (with_deg) offset += calendar_cost(plan.storage).cost;
    }
    lp.set_objective_offset(offset);

    for (std::size_t t = 0; t < m; ++t) {
        std::vector<lp::Term> balance{{day.grid[t], 1.0}, {day.pv[t], 1.0}};
        for (const BatteryColumns& cols : day.batteries) {
            balance.push_back({cols.discharge[t], 1.0});
            balance.push_back({cols.charge[t], -1.0});
        }
        lp.add_constraint(std::move(balance), lp::Sense::kEqual, prof.load[t], indexed("bal", t));
    }

    for (std::size_t i = 0; i < k; ++i) {
        const BatteryPlan& plan = problem.batteries[i];
        const StorageUnit& st = plan.storage;
        const BatteryColumns& cols = day.batteries[i];
        const double out_dis = dt / st.eta_dis;  // cell energy per MW discharged
        const double in_cha = dt * st.eta_cha;   // cell energy per MW charged
        const std::vector<LinePiece> pieces = plan.pwl.pieces();
        for (std::size_t t = 0; t < m; ++t) {
            std::vector<lp::Term> soc{{cols.soc[t], 1.0},
                                      {cols.discharge[t], out_dis},
                                      {cols.charge[t], -in_cha}};
            double rhs = 0.0;
            if (t > 0) {
                soc.push_back({cols.soc[t - 1], -1.0});
            } else if (problem.flags.soc == SocBoundary::kCyclic) {
                soc.push_back({cols.soc[m - 1], -1.0});
            } else {
                rhs = problem.flags.initial_soc_fraction * st.e_cap;
            }
            lp.add_constraint(std::move(soc), lp::Sense::kEqual, rhs, indexed("soc", i, t));

            const double scale = 1.0 / st.e_cap;
            lp.add_constraint({{cols.discharge[t], out_dis * scale},
                               {cols.charge[t], -in_cha * scale},
                               {cols.dod[t], -1.0}},
                              lp::Sense::kLessEqual, 0.0, indexed("dodp", i, t));
            lp.add_constraint({{cols.discharge[t], -out_dis * scale},
                               {cols.charge[t], in_cha * scale},
                               {cols.dod[t], -1.0}},
                              lp::Sense::kLessEqual, 0.0, indexed("dodn", i, t));
            if (with_deg) {
                for (std::size_t s = 0; s < pieces.size(); ++s) {
                    lp.add_constraint({{cols.dod[t], pieces[s].slope}, {cols.epigraph[t], -1.0}},
                                      lp::Sense::kLessEqual, -pieces[s].intercept,
                                      indexed("epi", i, t) + "_" + std::to_string(s));
                }
            }
        }
    }

    for (std::size_t t = 0; t < m; ++t) {
        lp.add_constraint({{day.grid[t], 1.0}, {day.peak, -1.0}}, lp::Sense::kLessEqual, 0.0,
                          indexed("pk", t));
    }
    return day;
}

DispatchResult extract(const lp::LPSolution& solution, const DayLp& day, const DayProblem& problem) {
    if (solution.status != lp::Status::kOptimal) {
        throw Error(ErrorCode::kSolverStatus,
                    std::string("dispatch LP not optimal: ") + lp::to_string(solution.status));
    }
    const auto& x = solution.values;
    auto val = [&](int col) { return x[static_cast<std::size_t>(col)]; };

    const DayProfile& prof = problem.profile;
    const Tariff& tariff = problem.tariff;
    const std::size_t m = prof.intervals();
    const double dt = prof.dt;
    const bool with_deg = problem.flags.degradation_in_objective;

    DispatchResult res;
    res.dt = dt;
    res.lp_iterations = solution.iterations;
    res.grid.resize(m);
    res.pv_used.resize(m);
    for (std::size_t t = 0; t < m; ++t) {
        res.grid[t] = val(day.grid[t]);
        res.pv_used[t] = val(day.pv[t]);
        res.cost.energy += tariff.price_at_hour(static_cast<double>(t) * dt) * kKiloPerMega * dt *
                           res.grid[t];
    }
    res.peak_mw = val(day.peak);
    res.cost.peak = tariff.daily_capacity_price() * kKiloPerMega * res.peak_mw;

    std::vector<double> injected(m, 0.0);
    for (std::size_t i = 0; i < problem.batteries.size(); ++i) {
        const BatteryPlan& plan = problem.batteries[i];
        const StorageUnit& st = plan.storage;
        const BatteryColumns& cols = day.batteries[i];
        BatteryTrace tr;
        tr.discharge.resize(m);
        tr.charge.resize(m);
        tr.net.resize(m);
        tr.soc.resize(m);
        tr.dod.resize(m);
        tr.dod_lp.resize(m);
        for (std::size_t t = 0; t < m; ++t) {
            tr.discharge[t] = val(cols.discharge[t]);
            tr.charge[t] = val(cols.charge[t]);
            tr.net[t] = tr.discharge[t] / st.eta_dis - tr.charge[t] * st.eta_cha;
            tr.soc[t] = val(cols.soc[t]);
            tr.dod[t] = std::abs(tr.net[t]) * dt / st.e_cap;
            tr.dod_lp[t] = val(cols.dod[t]);
            if (with_deg) tr.degradation_pwl += val(cols.epigraph[t]);
            if (plan.life && !plan.life->ignores_degradation()) {
                tr.degradation_exact += cycle_cost(0.5, tr.dod[t], st, *plan.life);
            }
            res.cost.om += tariff.om_cost * kKiloPerMega * dt * (tr.discharge[t] + tr.charge[t]);
            injected[t] += tr.discharge[t] - tr.charge[t];
            if (tr.discharge[t] > kSimultaneousTol && tr.charge[t] > kSimultaneousTol) {
                ++res.simultaneous_intervals;
            }

            double prev;
            if (t > 0) {
                prev = tr.soc[t - 1];
            } else if (problem.flags.soc == SocBoundary::kCyclic) {
                prev = val(cols.soc[m - 1]);
            } else {
                prev = problem.flags.initial_soc_fraction * st.e_cap;
            }
            res.soc_residual =
                std::max(res.soc_residual, std::abs(tr.soc[t] - prev + tr.net[t] * dt));
        }
        tr.calendar = calendar_cost(st).cost;
        res.cost.calendar += tr.calendar;
        res.cost.degradation_exact += tr.degradation_exact + tr.calendar;
        if (with_deg) res.cost.degradation_pwl += tr.degradation_pwl + tr.calendar;
        res.batteries.push_back(std::move(tr));
    }

    double max_grid = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double resid = res.grid[t] + res.pv_used[t] + injected[t] - prof.load[t];
        res.balance_residual = std::max(res.balance_residual, std::abs(resid));
        max_grid = std::max(max_grid, res.grid[t]);
    }
    res.peak_gap = std::abs(res.peak_mw - max_grid);
    res.cost.total = res.cost.energy + res.cost.peak + res.cost.om + res.cost.degradation_pwl;
    return res;
}

DispatchResult optimize_day(const DayProblem& problem, const lp::Backend& backend,
                            const lp::SolveOptions& options) {
    const DayLp day = build_day_lp(problem);
    const lp::LPSolution sol = backend(day.program, options);
    return extract(sol, day, problem);
}

double baseline_cost(const DayProfile& profile, const Tariff& tariff, const lp::Backend& backend) {
    DayProblem problem{profile, tariff, {}, {}};
    return optimize_day(problem, backend).cost.total;
}

}  // namespace pshave
