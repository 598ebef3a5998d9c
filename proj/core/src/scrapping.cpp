#include "pshave/scrapping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pshave/error.hpp"

namespace pshave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dod(double d) {
    if (!(d > 0.0 && d <= 1.0)) {
        throw Error(ErrorCode::kValidation, "depth of discharge must lie in (0, 1]");
    }
}

// Real roots of x^3 + a x^2 + b x + c.
struct CubicRoots {
    std::array<double, 3> x{};
    int count = 0;
};

CubicRoots solve_monic_cubic(double a, double b, double c) {
    CubicRoots out;
    const double q = (a * a - 3.0 * b) / 9.0;
    const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    const double q3 = q * q * q;
    const double shift = a / 3.0;
    if (r * r < q3) {
        const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
        const double m = -2.0 * std::sqrt(q);
        out.x[0] = m * std::cos(theta / 3.0) - shift;
        out.x[1] = m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - shift;
        out.x[2] = m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - shift;
        out.count = 3;
    } else {
        const double s = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
        const double t = (s == 0.0) ? 0.0 : q / s;
        out.x[0] = (s + t) - shift;
        out.count = 1;
    }
    return out;
}

}  // namespace

void validate(const ScrappingCriterion& criterion) {
    if (const auto* cap = std::get_if<CapacityBased>(&criterion)) {
        if (!(cap->c_end > 0.0 && cap->c_end < 1.0)) {
            throw Error(ErrorCode::kValidation, "capacity criterion c_end must lie in (0, 1)");
        }
    } else if (const auto* eff = std::get_if<EfficiencyBased>(&criterion)) {
        if (!(eff->threshold.target_product > 1.0)) {
            throw Error(ErrorCode::kValidation,
                        "efficiency criterion target product must exceed 1");
        }
    }
}

double efficiency_threshold(const Tariff& tariff) {
    const double margin = tariff.peak - tariff.om_cost;
    if (!(margin > 0.0)) {
        throw Error(ErrorCode::kNoArbitrageMargin,
                    "peak price does not exceed the O&M cost; no arbitrage margin");
    }
    return (tariff.valley + tariff.om_cost) / margin;
}

ScrapThreshold clr_limit(const Tariff& tariff, const CellParams& cell, int inverter_passes) {
    if (inverter_passes != 1 && inverter_passes != 2) {
        throw Error(ErrorCode::kValidation, "inverter_passes must be 1 or 2");
    }
    ScrapThreshold th;
    th.ratio_total = efficiency_threshold(tariff);
    th.y = th.ratio_total * cell.n_cha /
           (std::pow(cell.eta_inv, inverter_passes) * cell.n_dis);
    if (cell.v_dis <= th.y * cell.v_cha) {
        throw Error(ErrorCode::kUneconomicAtBirth,
                    "battery cannot beat the arbitrage threshold even when fresh");
    }
    th.clr_limit = (cell.v_dis - th.y * cell.v_cha) / (cell.n_dis + th.y * cell.n_cha);
    th.target_product = th.clr_limit / (cell.c0 * cell.r0);
    return th;
}

ScrapThreshold threshold_from_battery_efficiency(double battery_eff, const CellParams& cell) {
    if (!(battery_eff > 0.0 && battery_eff <= 1.0)) {
        throw Error(ErrorCode::kValidation, "battery efficiency must lie in (0, 1]");
    }
    ScrapThreshold th;
    th.ratio_total = battery_eff * cell.eta_inv;
    th.y = battery_eff * cell.n_cha / cell.n_dis;
    th.clr_limit = (cell.v_dis - th.y * cell.v_cha) / (cell.n_dis + th.y * cell.n_cha);
    th.target_product = th.clr_limit / (cell.c0 * cell.r0);
    return th;
}

double battery_efficiency(double clr, const CellParams& cell) {
    return (cell.n_dis / cell.n_cha) * (cell.v_dis - cell.n_dis * clr) /
           (cell.v_cha + cell.n_cha * clr);
}

double scrap_battery_efficiency(const Tariff& tariff, const CellParams& cell, int inverter_passes) {
    return efficiency_threshold(tariff) / std::pow(cell.eta_inv, inverter_passes);
}

RisingBranchPeak rising_branch_peak(double d, const DegradationCoeffs& c) {
    const double a = c.alpha(d);
    const double b = c.beta(d);
    RisingBranchPeak peak;
    // p'(x) = -b + 2 a x - 3 a b x^2 has a local maximum only for a > 3 b^2.
    const double disc = a * a - 3.0 * a * b * b;
    if (a <= 0.0 || disc <= 0.0) {
        return peak;
    }
    peak.exists = true;
    peak.x = (a + std::sqrt(disc)) / (3.0 * a * b);
    peak.value = cap_res_product_sqrt(peak.x, d, c);
    return peak;
}

double cubic_sqrt_q(double target, double d, const DegradationCoeffs& c) {
    require_dod(d);
    if (!(target >= 1.0)) {
        throw Error(ErrorCode::kValidation, "capacity-resistance target must be >= 1");
    }
    if (target == 1.0) {
        return 0.0;
    }
    const RisingBranchPeak peak = rising_branch_peak(d, c);
    if (!peak.exists || peak.value < target) {
        throw TargetUnreachable(target, std::max(1.0, peak.value), d);
    }

    const double a = c.alpha(d);
    const double b = c.beta(d);
    // -a b x^3 + a x^2 - b x + (1 - target) = 0, made monic.
    const CubicRoots roots = solve_monic_cubic(-1.0 / b, 1.0 / a, (target - 1.0) / (a * b));

    const double upper = peak.x * (1.0 + 1e-9);
    double best = kInf;
    for (int i = 0; i < roots.count; ++i) {
        const double x = roots.x[static_cast<std::size_t>(i)];
        if (x > 0.0 && x <= upper) {
            best = std::min(best, x);
        }
    }
    if (!std::isfinite(best)) {
        // Double root at the fold: rounding can push both roots just past the peak.
        best = peak.x;
    }
    best = std::min(best, peak.x);

    // Newton polish on the rising branch; skipped where the slope vanishes.
    for (int it = 0; it < 3; ++it) {
        const double residual = cap_res_product_sqrt(best, d, c) - target;
        const double slope = -b + 2.0 * a * best - 3.0 * a * b * best * best;
        if (slope <= 1e-12 || std::abs(residual) <= 1e-15 * target) {
            break;
        }
        best = std::min(best - residual / slope, peak.x);
    }
    return best;
}

double max_cycles_capacity(double c_end, double d, double c_st, const DegradationCoeffs& c) {
    require_dod(d);
    if (!(c_end > 0.0 && c_end <= 1.0) || !(c_st > 0.0)) {
        throw Error(ErrorCode::kValidation, "max_cycles_capacity: c_end in (0,1], c_st > 0");
    }
    const double fade = 1.0 - c_end;
    const double beta = c.beta(d);
    return fade * fade / (2.0 * c_st * d * beta * beta);
}

double max_cycles_efficiency(const ScrapThreshold& threshold, double d, double c_st,
                             const DegradationCoeffs& c) {
    if (!(c_st > 0.0)) {
        throw Error(ErrorCode::kValidation, "max_cycles_efficiency: c_st must be positive");
    }
    const double x = cubic_sqrt_q(threshold.target_product, d, c);
    return x * x / (2.0 * d * c_st);
}

DodRange reachable_dod_range(double target, const DegradationCoeffs& c) {
    auto reach = [&](double d) {
        const RisingBranchPeak p = rising_branch_peak(d, c);
        return p.exists && p.value >= target;
    };
    constexpr int kGrid = 1000;
    int first = -1;
    int last = -1;
    double best_value = 1.0;
    double best_d = 1.0;
    for (int i = 1; i <= kGrid; ++i) {
        const double d = static_cast<double>(i) / kGrid;
        const RisingBranchPeak p = rising_branch_peak(d, c);
        if (p.exists && p.value > best_value) {
            best_value = p.value;
            best_d = d;
        }
        if (reach(d)) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) {
        throw TargetUnreachable(target, best_value, best_d);
    }
    auto refine = [&](double reachable, double unreachable) {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (reachable + unreachable);
            (reach(mid) ? reachable : unreachable) = mid;
        }
        return reachable;
    };
    DodRange range;
    range.lo = refine(static_cast<double>(first) / kGrid, static_cast<double>(first - 1) / kGrid);
    range.hi = (last == kGrid) ? 1.0
                               : refine(static_cast<double>(last) / kGrid,
                                        static_cast<double>(last + 1) / kGrid);
    return range;
}

LifeModel LifeModel::for_cell(const CellParams& cell, ScrappingCriterion criterion,
                              UnreachablePolicy policy) {
    validate(criterion);
    return LifeModel{std::move(criterion), coeffs_at_voltage(cell.mean_voltage()), cell.c0,
                     policy};
}

double LifeModel::max_cycles(double d) const {
    if (d <= 0.0) {
        return kInf;
    }
    if (const auto* cap = std::get_if<CapacityBased>(&criterion)) {
        return max_cycles_capacity(cap->c_end, d, c_st, coeffs);
    }
    if (const auto* eff = std::get_if<EfficiencyBased>(&criterion)) {
        try {
            return max_cycles_efficiency(eff->threshold, d, c_st, coeffs);
        } catch (const TargetUnreachable&) {
            if (unreachable == UnreachablePolicy::kImmortal) {
                return kInf;
            }
            throw;
        }
    }
    throw Error(ErrorCode::kValidation, "life model has no scrapping criterion");
}

}  // namespace pshave
