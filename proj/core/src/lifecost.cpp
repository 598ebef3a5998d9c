#include "pshave/lifecost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "pshave/error.hpp"
#include "pshave/format.hpp"

namespace pshave {

namespace {

constexpr double kDomainStep = 0.005;

}  // namespace

void validate(const StorageUnit& storage) {
    if (!(storage.e_cap > 0.0) || !(storage.p_dis_max >= 0.0) || !(storage.p_cha_max >= 0.0) ||
        !(storage.unit_invest >= 0.0)) {
        throw Error(ErrorCode::kValidation, "storage ratings must be positive");
    }
    if (!(storage.eta_dis > 0.0 && storage.eta_dis <= 1.0) ||
        !(storage.eta_cha > 0.0 && storage.eta_cha <= 1.0)) {
        throw Error(ErrorCode::kValidation, "storage efficiencies must lie in (0, 1]");
    }
    validate(storage.cell);
}

double cycle_loss_rate(double n, double d, const LifeModel& model) {
    if (n < 0.0) {
        throw Error(ErrorCode::kValidation, "cycle count must be non-negative");
    }
    if (n == 0.0 || d <= 0.0) {
        return 0.0;
    }
    return n / model.max_cycles(d);
}

double cycle_cost(double n, double d, const StorageUnit& storage, const LifeModel& model) {
    return cycle_loss_rate(n, d, model) * storage.total_investment();
}

CalendarCost calendar_cost(const StorageUnit& storage) {
    CalendarCost out;
    if (std::isinf(storage.cell.t_end_cal)) {
        return out;
    }
    out.rate = 1.0 / storage.cell.t_end_cal;
    out.cost = out.rate * storage.total_investment();
    return out;
}

PwlCurve PwlCurve::from_points(std::vector<Breakpoint> points) {
    if (points.size() < 2) {
        throw Error(ErrorCode::kValidation, "PWL curve needs at least two breakpoints");
    }
    if (points.front().d != 0.0 || points.front().g != 0.0) {
        throw Error(ErrorCode::kValidation, "PWL curve must start at (0, 0)");
    }
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (!(points[k].d > points[k - 1].d) || !std::isfinite(points[k].g)) {
            throw Error(ErrorCode::kValidation,
                        "PWL breakpoints must be finite with strictly increasing DOD");
        }
    }
    if (points.back().d > 1.0 + 1e-12) {
        throw Error(ErrorCode::kValidation, "PWL curve extends beyond DOD 1");
    }
    PwlCurve curve(std::move(points));
    const std::vector<double> s = curve.slopes();
    for (std::size_t k = 1; k < s.size(); ++k) {
        // relative slack absorbs rounding in exactly linear costs
        if (s[k] < s[k - 1] - 1e-12 * std::max(1.0, std::abs(s[k - 1]))) {
            throw NonConvexCost(k, s[k - 1], s[k]);
        }
    }
    return curve;
}

PwlCurve PwlCurve::zero(double d_max) {
    return PwlCurve({{0.0, 0.0}, {d_max, 0.0}});
}

std::vector<double> PwlCurve::slopes() const {
    std::vector<double> s;
    s.reserve(points_.size() - 1);
    for (std::size_t k = 1; k < points_.size(); ++k) {
        s.push_back((points_[k].g - points_[k - 1].g) / (points_[k].d - points_[k - 1].d));
    }
    return s;
}

std::vector<LinePiece> PwlCurve::pieces() const {
    std::vector<LinePiece> out;
    const std::vector<double> s = slopes();
    out.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        out.push_back({s[k], points_[k].g - s[k] * points_[k].d});
    }
    return out;
}

double PwlCurve::evaluate(double d) const {
    std::size_t k = 1;
    while (k + 1 < points_.size() && d > points_[k].d) {
        ++k;
    }
    const Breakpoint& a = points_[k - 1];
    const Breakpoint& b = points_[k];
    return a.g + (b.g - a.g) * (d - a.d) / (b.d - a.d);
}

void PwlCurve::write_csv(std::ostream& os) const {
    os << "dod,cost\n";
    for (const Breakpoint& p : points_) {
        os << format_number(p.d) << ',' << format_number(p.g) << '\n';
    }
}

std::vector<double> breakpoint_dods(const PwlOptions& options) {
    if (options.segments < 1) {
        throw Error(ErrorCode::kValidation, "PWL needs at least one segment");
    }
    if (!(options.d_max > 0.0 && options.d_max <= 1.0) || options.d_first < 0.0 ||
        options.d_first >= options.d_max) {
        throw Error(ErrorCode::kValidation, "PWL domain must satisfy 0 <= d_first < d_max <= 1");
    }
    const int k_count = options.segments;
    std::vector<double> d(static_cast<std::size_t>(k_count));
    if (options.d_first == 0.0 && options.spacing == Spacing::kUniform) {
        for (int k = 0; k < k_count; ++k) {
            d[static_cast<std::size_t>(k)] = options.d_max * (k + 1) / k_count;
        }
        return d;
    }
    const double first = options.d_first > 0.0 ? options.d_first : options.d_max / k_count;
    if (k_count == 1) {
        return {options.d_max};
    }
    const double span = options.d_max - first;
    constexpr double kRatio = 0.7;
    const double denom = 1.0 - std::pow(kRatio, k_count - 1);
    for (int k = 0; k < k_count; ++k) {
        const double u = options.spacing == Spacing::kUniform
                             ? static_cast<double>(k) / (k_count - 1)
                             : (1.0 - std::pow(kRatio, k)) / denom;
        d[static_cast<std::size_t>(k)] = first + span * u;
    }
    d.back() = options.d_max;
    return d;
}

PwlCurve build_pwl(const std::function<double(double)>& cost, const PwlOptions& options) {
    std::vector<Breakpoint> points{{0.0, 0.0}};
    for (double d : breakpoint_dods(options)) {
        points.push_back({d, cost(d)});
    }
    return PwlCurve::from_points(std::move(points));
}

PwlCurve build_pwl(const LifeModel& model, const StorageUnit& storage, const PwlOptions& options) {
    return build_pwl([&](double d) { return cycle_cost(0.5, d, storage, model); }, options);
}

PwlDomain efficiency_pwl_domain(const LifeModel& model, const StorageUnit& storage, int segments,
                                Spacing spacing, double margin) {
    const auto* eff = std::get_if<EfficiencyBased>(&model.criterion);
    if (eff == nullptr) {
        throw Error(ErrorCode::kValidation, "efficiency_pwl_domain needs an efficiency criterion");
    }
    const DodRange range = reachable_dod_range(eff->threshold.target_product, model.coeffs);
    const double lo = std::min(range.lo + margin, range.hi);
    const double hi = range.hi >= 1.0 ? 1.0 : range.hi - margin;
    if (!(hi > lo)) {
        throw TargetUnreachable(eff->threshold.target_product,
                                rising_branch_peak(range.lo, model.coeffs).value, range.lo);
    }
    LifeModel strict = model;
    strict.unreachable = UnreachablePolicy::kError;
    for (double d_max = hi; d_max > lo + kDomainStep; d_max -= kDomainStep) {
        try {
            build_pwl(strict, storage, {segments, d_max, lo, spacing});
            return {lo, d_max};
        } catch (const NonConvexCost&) {
        }
    }
    // Whatever is left is one segment from the origin to lo.
    return {0.0, lo};
}

PwlCurve default_pwl(const LifeModel& model, const StorageUnit& storage, int segments,
                     Spacing spacing) {
    if (model.ignores_degradation()) {
        return PwlCurve::zero();
    }
    if (std::holds_alternative<EfficiencyBased>(model.criterion)) {
        const PwlDomain dom = efficiency_pwl_domain(model, storage, segments, spacing);
        LifeModel strict = model;
        strict.unreachable = UnreachablePolicy::kError;
        if (dom.d_first == 0.0) {
            return build_pwl(strict, storage, {1, dom.d_max, 0.0, Spacing::kUniform});
        }
        return build_pwl(strict, storage, {segments, dom.d_max, dom.d_first, spacing});
    }
    return build_pwl(model, storage, {segments, 1.0, 0.0, spacing});
}

}  // namespace pshave
