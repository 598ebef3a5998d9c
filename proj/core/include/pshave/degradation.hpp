#pragma once

namespace pshave {

/// Electrochemical description of a single cell of the storage pack.
///
/// Voltages are the average charge/discharge terminal voltages, rates are in C
/// (1/h). `c0` and `r0` are the fresh cell capacity (Ah) and internal
/// resistance (ohm); together they anchor the normalized aging curves to the
/// absolute capacity-resistance limit of the efficiency criterion.
struct CellParams {
    double v_cha = 3.7;
    double v_dis = 3.7;
    double n_cha = 1.0;
    double n_dis = 1.0;
    double c0 = 2.5;
    double r0 = 0.1718;
    double eta_inv = 0.9;
    double t_end_cal = 5475.0;  ///< calendar life in days; +inf disables calendar aging

    double mean_voltage() const { return 0.5 * (v_cha + v_dis); }
};

/// Throws pshave::Error(kValidation) when a field is out of range or when the
/// charge and discharge powers n*V do not balance to 1e-9 relative.
void validate(const CellParams& cell);

/// Capacity-fade (beta, Ah^-0.5) and resistance-growth (alpha, Ah^-1)
/// coefficients of the cycle-aging model. alpha0 is negative near 3.7 V.
struct DegradationCoeffs {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double alpha0 = 0.0;
    double alpha1 = 0.0;

    double beta(double dod) const { return beta0 + beta1 * dod; }
    double alpha(double dod) const { return alpha0 + alpha1 * dod; }
};

struct AgingPoint {
    double q = 0.0;       ///< cumulative charge throughput (Ah)
    double d = 0.0;       ///< depth of discharge
    double c_star = 1.0;  ///< normalized capacity
    double r_star = 1.0;  ///< normalized resistance
};

/// Coefficients as quadratics of the mean cell voltage `v`.
DegradationCoeffs coeffs_at_voltage(double v);

/// 1 - beta(d) sqrt(q). Not clamped: may go negative for very large q.
double capacity_fade(double q, double d, const DegradationCoeffs& c);

/// 1 + alpha(d) q. Decreases with q when alpha(d) < 0.
double resistance_growth(double q, double d, const DegradationCoeffs& c);

/// Product of capacity_fade and resistance_growth, evaluated as the cubic in
/// sqrt(q): 1 - b x + a x^2 - a b x^3.
double cap_res_product(double q, double d, const DegradationCoeffs& c);

/// Same cubic, parameterized directly by x = sqrt(q).
double cap_res_product_sqrt(double x, double d, const DegradationCoeffs& c);

/// Half-cycle throughput approximation: n cycles of depth d move n*2d*c_st Ah.
double throughput_from_cycles(double n, double d, double c_st);

AgingPoint age(double q, double d, const DegradationCoeffs& c);

}  // namespace pshave
