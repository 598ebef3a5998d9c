#pragma once

#include <variant>

#include "pshave/degradation.hpp"
#include "pshave/tariff.hpp"

namespace pshave {

/// End-of-life level of the efficiency criterion.
///
/// `ratio_total` is the break-even total (inverter x battery) round-trip
/// efficiency; `clr_limit` the absolute capacity*resistance product (V) at which
/// the battery hits it; `target_product` the same limit normalized by c0*r0.
struct ScrapThreshold {
    double ratio_total = 0.0;
    double y = 0.0;
    double clr_limit = 0.0;
    double target_product = 0.0;
};

struct CapacityBased {
    double c_end = 0.8;
};

struct EfficiencyBased {
    ScrapThreshold threshold;
};

/// Degradation left out of the operating decision entirely.
struct NoneIgnored {};

using ScrappingCriterion = std::variant<CapacityBased, EfficiencyBased, NoneIgnored>;

void validate(const ScrappingCriterion& criterion);

/// (pi_v + pi_cs) / (pi_p - pi_cs). Throws kNoArbitrageMargin when pi_p <= pi_cs.
double efficiency_threshold(const Tariff& tariff);

/// Capacity*resistance limit for the tariff. `inverter_passes` selects whether
/// the inverter loss enters y once (as the closed form is usually written) or
/// twice (charge and discharge pass). Throws kUneconomicAtBirth when
/// v_dis <= y * v_cha.
ScrapThreshold clr_limit(const Tariff& tariff, const CellParams& cell, int inverter_passes = 1);

/// Threshold whose battery-only round-trip efficiency equals `battery_eff`.
ScrapThreshold threshold_from_battery_efficiency(double battery_eff, const CellParams& cell);

/// Battery-only round-trip efficiency for an absolute capacity*resistance
/// product `clr` (V).
double battery_efficiency(double clr, const CellParams& cell);

/// Battery-only efficiency at which the battery is scrapped:
/// ratio_total / eta_inv^passes.
double scrap_battery_efficiency(const Tariff& tariff, const CellParams& cell, int inverter_passes);

/// Local maximum of the capacity*resistance product on the physical branch
/// (0 < sqrt(Q) < 1/beta). `exists` is false when the curve never rises again
/// after its initial dip, in which case `value` is 1 (attained at Q = 0).
struct RisingBranchPeak {
    bool exists = false;
    double x = 0.0;
    double value = 1.0;
};

RisingBranchPeak rising_branch_peak(double d, const DegradationCoeffs& c);

/// Smallest non-negative sqrt(Q) at which the normalized capacity*resistance
/// product reaches `target`, by closed-form cubic root extraction. Throws
/// TargetUnreachable when the rising branch peaks below the target.
double cubic_sqrt_q(double target, double d, const DegradationCoeffs& c);

double max_cycles_capacity(double c_end, double d, double c_st, const DegradationCoeffs& c);

double max_cycles_efficiency(const ScrapThreshold& threshold, double d, double c_st,
                             const DegradationCoeffs& c);

/// DOD interval on which an efficiency target is reachable. The peak of the
/// product curve is unimodal in d for the published coefficients.
struct DodRange {
    double lo = 0.0;
    double hi = 0.0;
};

DodRange reachable_dod_range(double target, const DegradationCoeffs& c);

enum class UnreachablePolicy {
    kError,     ///< propagate TargetUnreachable
    kImmortal,  ///< criterion never fires: infinite cycle life at that DOD
};

/// A scrapping criterion bound to a concrete cell, i.e. a function
/// DOD -> maximum cycle number.
struct LifeModel {
    ScrappingCriterion criterion = CapacityBased{};
    DegradationCoeffs coeffs{};
    double c_st = 2.5;
    UnreachablePolicy unreachable = UnreachablePolicy::kError;

    static LifeModel for_cell(const CellParams& cell, ScrappingCriterion criterion,
                              UnreachablePolicy policy = UnreachablePolicy::kError);

    bool ignores_degradation() const { return std::holds_alternative<NoneIgnored>(criterion); }

    /// N_end(d). Returns +inf at d = 0 and, under kImmortal, where the
    /// efficiency target cannot be reached.
    double max_cycles(double d) const;
};

}  // namespace pshave
