#include "pshave/error.hpp"

#include <string>

namespace pshave {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kValidation: return "Validation";
        case ErrorCode::kParse: return "Parse";
        case ErrorCode::kNoArbitrageMargin: return "NoArbitrageMargin";
        case ErrorCode::kUneconomicAtBirth: return "UneconomicAtBirth";
        case ErrorCode::kTargetUnreachable: return "TargetUnreachable";
        case ErrorCode::kNonConvexCost: return "NonConvexCost";
        case ErrorCode::kImmortalBattery: return "ImmortalBattery";
        case ErrorCode::kNoConvergence: return "NoConvergence";
        case ErrorCode::kSolverStatus: return "SolverStatus";
    }
    return "Unknown";
}

TargetUnreachable::TargetUnreachable(double target, double curve_max, double dod)
    : Error(ErrorCode::kTargetUnreachable,
            "capacity-resistance target " + std::to_string(target) +
                " unreachable at DOD " + std::to_string(dod) +
                " (curve maximum " + std::to_string(curve_max) + ")"),
      target_(target),
      curve_max_(curve_max),
      dod_(dod) {}

NonConvexCost::NonConvexCost(std::size_t segment, double left_slope, double right_slope)
    : Error(ErrorCode::kNonConvexCost,
            "degradation cost not convex: segment " + std::to_string(segment) +
                " slope " + std::to_string(right_slope) + " < previous slope " +
                std::to_string(left_slope)),
      segment_(segment) {}

}  // namespace pshave
