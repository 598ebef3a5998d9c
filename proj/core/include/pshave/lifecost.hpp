#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "pshave/degradation.hpp"
#include "pshave/scrapping.hpp"

namespace pshave {

/// Grid-side battery system. Energy in MWh, power in MW, investment in $/kWh.
struct StorageUnit {
    double e_cap = 4.0;
    double p_dis_max = 4.0;
    double p_cha_max = 4.0;
    double eta_dis = 0.89;
    double eta_cha = 0.89;
    double unit_invest = 176.0;
    CellParams cell{};

    /// Total investment in $.
    double total_investment() const { return e_cap * 1000.0 * unit_invest; }
};

void validate(const StorageUnit& storage);

/// Fraction of life consumed by n cycles at depth d.
double cycle_loss_rate(double n, double d, const LifeModel& model);

/// Loss rate times total investment, in $.
double cycle_cost(double n, double d, const StorageUnit& storage, const LifeModel& model);

struct CalendarCost {
    double rate = 0.0;      ///< loss rate per day
    double cost = 0.0;      ///< $ per day
};

CalendarCost calendar_cost(const StorageUnit& storage);

struct Breakpoint {
    double d = 0.0;
    double g = 0.0;
};

/// One affine piece g >= slope * d + intercept of the epigraph.
struct LinePiece {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Convex piecewise-linear degradation cost in DOD, anchored at the origin.
class PwlCurve {
public:
    /// Throws Error(kValidation) on a malformed point list and NonConvexCost
    /// when the segment slopes decrease anywhere.
    static PwlCurve from_points(std::vector<Breakpoint> points);

    /// Flat zero cost over [0, d_max].
    static PwlCurve zero(double d_max = 1.0);

    const std::vector<Breakpoint>& points() const { return points_; }
    std::vector<double> slopes() const;
    std::vector<LinePiece> pieces() const;
    double d_max() const { return points_.back().d; }
    std::size_t segments() const { return points_.size() - 1; }

    /// Linear interpolation; beyond d_max the last segment is extended.
    double evaluate(double d) const;

    /// Two-column CSV: `dod,cost`.
    void write_csv(std::ostream& os) const;

private:
    explicit PwlCurve(std::vector<Breakpoint> points) : points_(std::move(points)) {}
    std::vector<Breakpoint> points_;
};

enum class Spacing {
    kUniform,
    kGeometric,  ///< gaps shrink toward d_max
};

struct PwlOptions {
    int segments = 8;
    double d_max = 1.0;
    /// First non-origin breakpoint. 0 places points at d_max*k/segments.
    double d_first = 0.0;
    Spacing spacing = Spacing::kUniform;
};

std::vector<double> breakpoint_dods(const PwlOptions& options);

/// Samples an arbitrary per-half-cycle cost g at the breakpoints.
PwlCurve build_pwl(const std::function<double(double)>& cost, const PwlOptions& options);

/// g(d) = cycle_cost(0.5, d) for the given life model.
PwlCurve build_pwl(const LifeModel& model, const StorageUnit& storage, const PwlOptions& options);

/// Breakpoint span for an efficiency life model: starts at the smallest DOD
/// where the target is reachable and ends at the largest d (below the
/// reachable limit minus `margin`) for which the sampled curve stays convex.
struct PwlDomain {
    double d_first = 0.0;
    double d_max = 1.0;
};

PwlDomain efficiency_pwl_domain(const LifeModel& model, const StorageUnit& storage,
                                int segments, Spacing spacing = Spacing::kUniform,
                                double margin = 1e-3);

/// Default PWL for a criterion: capacity uses [0, 1]; efficiency uses
/// efficiency_pwl_domain; NoneIgnored yields PwlCurve::zero().
PwlCurve default_pwl(const LifeModel& model, const StorageUnit& storage, int segments,
                     Spacing spacing = Spacing::kUniform);

}  // namespace pshave
