#include "pshave/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pshave/error.hpp"

namespace pshave {

namespace {

constexpr double kBetaCurv = 7.348e-3;
constexpr double kBetaVertexV = 3.667;
constexpr double kBetaVertex = 7.600e-4;
constexpr double kBeta1 = 4.081e-3;
constexpr double kAlphaCurv = 2.153e-4;
constexpr double kAlphaVertexV = 3.725;
constexpr double kAlphaVertex = -1.521e-5;
constexpr double kAlpha1 = 2.798e-4;

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw Error(ErrorCode::kValidation,
                    std::string("cell parameter ") + name + " must be positive");
    }
}

}  // namespace

void validate(const CellParams& cell) {
    require_positive(cell.v_cha, "v_cha");
    require_positive(cell.v_dis, "v_dis");
    require_positive(cell.n_cha, "n_cha");
    require_positive(cell.n_dis, "n_dis");
    require_positive(cell.c0, "c0");
    require_positive(cell.r0, "r0");
    require_positive(cell.eta_inv, "eta_inv");
    require_positive(cell.t_end_cal, "t_end_cal");
    if (cell.eta_inv > 1.0) {
        throw Error(ErrorCode::kValidation, "cell parameter eta_inv must be <= 1");
    }
    const double p_dis = cell.n_dis * cell.v_dis;
    const double p_cha = cell.n_cha * cell.v_cha;
    if (std::abs(p_dis - p_cha) > 1e-9 * std::max(p_dis, p_cha)) {
        throw Error(ErrorCode::kValidation,
                    "cell power balance violated: n_dis*v_dis != n_cha*v_cha");
    }
}

DegradationCoeffs coeffs_at_voltage(double v) {
    const double db = v - kBetaVertexV;
    const double da = v - kAlphaVertexV;
    return DegradationCoeffs{
        .beta0 = kBetaCurv * db * db + kBetaVertex,
        .beta1 = kBeta1,
        .alpha0 = kAlphaCurv * da * da + kAlphaVertex,
        .alpha1 = kAlpha1,
    };
}

double capacity_fade(double q, double d, const DegradationCoeffs& c) {
    return 1.0 - c.beta(d) * std::sqrt(q);
}

double resistance_growth(double q, double d, const DegradationCoeffs& c) {
    return 1.0 + c.alpha(d) * q;
}

double cap_res_product_sqrt(double x, double d, const DegradationCoeffs& c) {
    const double b = c.beta(d);
    const double a = c.alpha(d);
    return 1.0 + x * (-b + x * (a - a * b * x));
}

double cap_res_product(double q, double d, const DegradationCoeffs& c) {
    return cap_res_product_sqrt(std::sqrt(q), d, c);
}

double throughput_from_cycles(double n, double d, double c_st) {
    return n * 2.0 * d * c_st;
}

AgingPoint age(double q, double d, const DegradationCoeffs& c) {
    return AgingPoint{q, d, capacity_fade(q, d, c), resistance_growth(q, d, c)};
}

}  // namespace pshave
