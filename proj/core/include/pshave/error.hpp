#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pshave {

enum class ErrorCode {
    kValidation,
    kParse,
    kNoArbitrageMargin,
    kUneconomicAtBirth,
    kTargetUnreachable,
    kNonConvexCost,
    kImmortalBattery,
    kNoConvergence,
    kSolverStatus,
};

std::string_view to_string(ErrorCode code);

// Validation and parse errors are caller mistakes; everything else comes out
// of the model or the solver. The CLI maps the two groups to exit codes 1 / 2.
inline bool is_input_error(ErrorCode code) {
    return code == ErrorCode::kValidation || code == ErrorCode::kParse;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when the capacity-resistance product never reaches the requested
/// end-of-life level on the physical (rising) branch of the aging curve.
class TargetUnreachable : public Error {
public:
    TargetUnreachable(double target, double curve_max, double dod);

    double target() const noexcept { return target_; }
    double curve_max() const noexcept { return curve_max_; }
    double dod() const noexcept { return dod_; }

private:
    double target_;
    double curve_max_;
    double dod_;
};

class NonConvexCost : public Error {
public:
    NonConvexCost(std::size_t segment, double left_slope, double right_slope);

    /// Index of the first segment whose slope is lower than its predecessor's.
    std::size_t segment() const noexcept { return segment_; }

private:
    std::size_t segment_;
};

}  // namespace pshave
