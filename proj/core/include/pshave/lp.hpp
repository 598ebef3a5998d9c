#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pshave::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double cost = 0.0;
};

struct Constraint {
    std::vector<Term> terms;
    Sense sense = Sense::kLessEqual;
    double rhs = 0.0;
    std::string name;
};

/// Minimization program: min c'x + offset s.t. rows, lower <= x <= upper.
class LinearProgram {
public:
    int add_variable(std::string name, double lower, double upper, double cost = 0.0);
    int add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});

    void set_cost(int var, double cost) { vars_.at(static_cast<std::size_t>(var)).cost = cost; }
    void set_objective_offset(double offset) { offset_ = offset; }

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return rows_; }
    double objective_offset() const { return offset_; }
    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }

    double objective_value(std::span<const double> x) const;

    /// Throws pshave::Error(kValidation) on dangling variable references or
    /// inverted bounds.
    void validate() const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    double offset_ = 0.0;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

const char* to_string(Status status);

struct LPSolution {
    Status status = Status::kInfeasible;
    std::vector<double> values;
    double objective = 0.0;
    /// Row duals of the final basis (d objective / d rhs); empty unless optimal.
    std::vector<double> duals;
    /// Largest scaled primal violation, max over rows of |viol| / (1 + |rhs|)
    /// and over bounds of |viol| / (1 + |bound|).
    double max_residual = 0.0;
    int iterations = 0;
};

struct SolveOptions {
    /// Relative optimality / feasibility tolerance of the pivoting.
    double tol = 1e-9;
    int max_iterations = 200000;
    /// Consecutive degenerate pivots before Bland's rule takes over.
    int stall_limit = 30;
};

/// Residual bound an optimal solution must meet.
inline constexpr double kResidualBound = 1e-7;

/// Bundled dense bounded-variable primal simplex. Deterministic.
LPSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

/// Seam for an external solver.
using Backend = std::function<LPSolution(const LinearProgram&, const SolveOptions&)>;

Backend default_backend();

double max_residual(const LinearProgram& lp, std::span<const double> x);

/// Dual objective b'y + sum_j (r_j > 0 ? r_j l_j : r_j u_j), r = c - A'y.
/// Returns -inf when a reduced cost points at an infinite bound.
double dual_objective(const LinearProgram& lp, std::span<const double> duals);

/// CPLEX-style LP text. The objective offset goes into a comment line.
void write_lp_format(const LinearProgram& lp, std::ostream& os);

}  // namespace pshave::lp
