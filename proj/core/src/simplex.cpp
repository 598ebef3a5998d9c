// Dense bounded-variable primal simplex.
//
// The program is brought to standard form  A x = b, 0 <= x <= u  with b >= 0
// by shifting/negating/splitting variables and adding slack columns. Rows whose
// slack cannot start basic get an artificial column. Phase 1 minimizes the sum
// of artificials, phase 2 the real cost. Pricing is Dantzig's largest reduced
// cost; after `stall_limit` consecutive degenerate pivots Bland's smallest
// index rule takes over until the objective moves again, which rules out
// cycling. The final basis is re-solved against the original matrix so the
// returned primal and dual values do not carry tableau drift.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pshave/error.hpp"
#include "pshave/lp.hpp"

namespace pshave::lp {

namespace {

constexpr double kPivotTol = 1e-9;

struct ColumnMap {
    int plus = -1;
    int minus = -1;   // split free variables only
    double shift = 0.0;
    double sign = 1.0;
};

// Dense LU with partial pivoting; solves M z = rhs or M' z = rhs.
class DenseLu {
public:
    explicit DenseLu(std::vector<double> m, std::size_t n) : lu_(std::move(m)), n_(n), piv_(n) {
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            double best = std::abs(at(k, k));
            for (std::size_t i = k + 1; i < n_; ++i) {
                if (std::abs(at(i, k)) > best) {
                    best = std::abs(at(i, k));
                    p = i;
                }
            }
            piv_[k] = p;
            if (best < 1e-13) {
                singular_ = true;
                return;
            }
            if (p != k) {
                for (std::size_t j = 0; j < n_; ++j) std::swap(at(k, j), at(p, j));
            }
            const double inv = 1.0 / at(k, k);
            for (std::size_t i = k + 1; i < n_; ++i) {
                const double f = at(i, k) * inv;
                at(i, k) = f;
                if (f == 0.0) continue;
                for (std::size_t j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
            }
        }
    }

    bool singular() const { return singular_; }

    std::vector<double> solve(std::vector<double> z) const {
        for (std::size_t k = 0; k < n_; ++k) std::swap(z[k], z[piv_[k]]);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < i; ++k) z[i] -= at(i, k) * z[k];
        }
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t k = i + 1; k < n_; ++k) z[i] -= at(i, k) * z[k];
            z[i] /= at(i, i);
        }
        return z;
    }

    std::vector<double> solve_transposed(std::vector<double> z) const {
        // (P' L U)' y = U' L' P y
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < i; ++k) z[i] -= at(k, i) * z[k];
            z[i] /= at(i, i);
        }
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t k = i + 1; k < n_; ++k) z[i] -= at(k, i) * z[k];
        }
        for (std::size_t k = n_; k-- > 0;) std::swap(z[k], z[piv_[k]]);
        return z;
    }

private:
    double& at(std::size_t i, std::size_t j) { return lu_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return lu_[i * n_ + j]; }

    std::vector<double> lu_;
    std::size_t n_;
    std::vector<std::size_t> piv_;
    bool singular_ = false;
};

class DenseSimplex {
public:
    DenseSimplex(const LinearProgram& lp, const SolveOptions& options) : lp_(lp), opt_(options) {
        build();
    }

    LPSolution run();

private:
    enum class Outcome { kOptimal, kUnbounded, kIterationLimit };

    void build();
    double& t(std::size_t i, std::size_t j) { return tab_[i * n_ + j]; }
    double t(std::size_t i, std::size_t j) const { return tab_[i * n_ + j]; }
    double nonbasic_value(std::size_t j) const { return at_upper_[j] ? ub_[j] : 0.0; }

    void price(const std::vector<double>& cost);
    Outcome iterate(bool phase_two);
    void pivot(std::size_t r, std::size_t j, double entering_value);
    void evict_artificials();
    std::vector<double> standard_values() const;
    void refine(std::vector<double>& xs, std::vector<double>& y_std) const;

    const LinearProgram& lp_;
    SolveOptions opt_;

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::size_t first_artificial_ = 0;
    std::vector<ColumnMap> map_;
    std::vector<double> a_;        // standard-form matrix, m x n
    std::vector<double> b_;
    std::vector<double> ub_;
    std::vector<double> cost_;
    std::vector<double> row_sign_;

    std::vector<double> tab_;      // B^-1 A
    std::vector<double> beta_;     // basic values
    std::vector<double> reduced_;
    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_;
    std::vector<char> at_upper_;
    double cost_scale_ = 1.0;
    int iterations_ = 0;
};

void DenseSimplex::build() {
    const auto& vars = lp_.variables();
    const auto& rows = lp_.constraints();
    m_ = rows.size();

    std::size_t ncols = 0;
    map_.resize(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const Variable& v = vars[j];
        ColumnMap& cm = map_[j];
        cm.plus = static_cast<int>(ncols++);
        if (std::isfinite(v.lower)) {
            cm.shift = v.lower;
            ub_.push_back(v.upper - v.lower);
            cost_.push_back(v.cost);
        } else if (std::isfinite(v.upper)) {
            cm.shift = v.upper;
            cm.sign = -1.0;
            ub_.push_back(kInf);
            cost_.push_back(-v.cost);
        } else {
            cm.minus = static_cast<int>(ncols++);
            ub_.push_back(kInf);
            ub_.push_back(kInf);
            cost_.push_back(v.cost);
            cost_.push_back(-v.cost);
        }
    }
    const std::size_t n_struct = ncols;

    // Dense structural rows and shifted right-hand sides.
    std::vector<std::vector<double>> dense(m_, std::vector<double>(n_struct, 0.0));
    b_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        double rhs = rows[i].rhs;
        for (const Term& term : rows[i].terms) {
            const ColumnMap& cm = map_[static_cast<std::size_t>(term.var)];
            rhs -= term.coef * cm.shift;
            dense[i][static_cast<std::size_t>(cm.plus)] += term.coef * cm.sign;
            if (cm.minus >= 0) dense[i][static_cast<std::size_t>(cm.minus)] -= term.coef;
        }
        b_[i] = rhs;
    }

    // Slack columns, then artificials where the slack cannot start basic.
    std::vector<int> slack_col(m_, -1);
    std::vector<double> slack_coef(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        if (rows[i].sense == Sense::kEqual) continue;
        slack_col[i] = static_cast<int>(ncols++);
        slack_coef[i] = rows[i].sense == Sense::kLessEqual ? 1.0 : -1.0;
        ub_.push_back(kInf);
        cost_.push_back(0.0);
    }
    row_sign_.assign(m_, 1.0);
    std::vector<int> start_basic(m_, -1);
    first_artificial_ = ncols;
    for (std::size_t i = 0; i < m_; ++i) {
        if (b_[i] < 0.0) row_sign_[i] = -1.0;
        if (slack_col[i] >= 0 && slack_coef[i] * row_sign_[i] > 0.0) {
            start_basic[i] = slack_col[i];
        } else {
            start_basic[i] = static_cast<int>(ncols++);
            ub_.push_back(kInf);
            cost_.push_back(0.0);
        }
    }
    n_ = ncols;

    a_.assign(m_ * n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const double s = row_sign_[i];
        for (std::size_t j = 0; j < n_struct; ++j) a_[i * n_ + j] = s * dense[i][j];
        if (slack_col[i] >= 0) a_[i * n_ + static_cast<std::size_t>(slack_col[i])] = s * slack_coef[i];
        if (start_basic[i] >= static_cast<int>(first_artificial_)) {
            a_[i * n_ + static_cast<std::size_t>(start_basic[i])] = 1.0;
        }
        b_[i] *= s;
    }

    tab_ = a_;
    beta_ = b_;
    basis_.resize(m_);
    is_basic_.assign(n_, 0);
    at_upper_.assign(n_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
        basis_[i] = static_cast<std::size_t>(start_basic[i]);
        is_basic_[basis_[i]] = 1;
    }
    double cmax = 0.0;
    for (double c : cost_) cmax = std::max(cmax, std::abs(c));
    cost_scale_ = 1.0 + cmax;
}

void DenseSimplex::price(const std::vector<double>& cost) {
    reduced_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &tab_[i * n_];
        for (std::size_t j = 0; j < n_; ++j) reduced_[j] -= cb * row[j];
    }
}

void DenseSimplex::pivot(std::size_t r, std::size_t j, double entering_value) {
    const double p = t(r, j);
    double* prow = &tab_[r * n_];
    std::vector<std::size_t> nz;
    nz.reserve(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        if (prow[k] != 0.0) {
            prow[k] /= p;
            nz.push_back(k);
        }
    }
    prow[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (i == r) continue;
        double* row = &tab_[i * n_];
        const double f = row[j];
        if (f == 0.0) continue;
        for (std::size_t k : nz) row[k] -= f * prow[k];
        row[j] = 0.0;
    }
    const double fr = reduced_[j];
    if (fr != 0.0) {
        for (std::size_t k : nz) reduced_[k] -= fr * prow[k];
        reduced_[j] = 0.0;
    }
    is_basic_[basis_[r]] = 0;
    basis_[r] = j;
    is_basic_[j] = 1;
    at_upper_[j] = 0;
    beta_[r] = entering_value;
}

DenseSimplex::Outcome DenseSimplex::iterate(bool phase_two) {
    const double dtol = opt_.tol * cost_scale_;
    int degenerate_run = 0;
    std::vector<double> col(m_);
    while (true) {
        if (iterations_ >= opt_.max_iterations) return Outcome::kIterationLimit;
        const bool bland = degenerate_run >= opt_.stall_limit;

        std::size_t enter = n_;
        double best = 0.0;
        double dir = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (is_basic_[j] || ub_[j] <= 0.0) continue;
            if (phase_two && j >= first_artificial_) continue;
            const double d = reduced_[j];
            double score = 0.0;
            double sdir = 0.0;
            if (!at_upper_[j] && d < -dtol) {
                score = -d;
                sdir = 1.0;
            } else if (at_upper_[j] && d > dtol) {
                score = d;
                sdir = -1.0;
            } else {
                continue;
            }
            if (bland) {
                enter = j;
                dir = sdir;
                break;
            }
            if (score > best) {
                best = score;
                enter = j;
                dir = sdir;
            }
        }
        if (enter == n_) return Outcome::kOptimal;

        for (std::size_t i = 0; i < m_; ++i) col[i] = t(i, enter);

        // Ratio test: entering moves by theta in direction dir.
        double theta = ub_[enter];
        std::size_t leave = m_;
        bool leave_to_upper = false;
        double leave_mag = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double alpha = dir * col[i];
            double limit;
            bool to_upper;
            if (alpha > kPivotTol) {
                limit = std::max(beta_[i], 0.0) / alpha;
                to_upper = false;
            } else if (alpha < -kPivotTol && std::isfinite(ub_[basis_[i]])) {
                limit = std::max(ub_[basis_[i]] - beta_[i], 0.0) / -alpha;
                to_upper = true;
            } else {
                continue;
            }
            const double mag = std::abs(alpha);
            bool take = false;
            if (limit < theta - 1e-12) {
                take = true;
            } else if (limit <= theta + 1e-12 && leave < m_) {
                take = bland ? basis_[i] < basis_[leave] : mag > leave_mag;
            }
            if (take) {
                theta = limit;
                leave = i;
                leave_to_upper = to_upper;
                leave_mag = mag;
            }
        }
        if (!std::isfinite(theta)) return Outcome::kUnbounded;

        ++iterations_;
        degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;

        for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * theta * col[i];
        const double entering_value = nonbasic_value(enter) + dir * theta;
        if (leave == m_) {
            at_upper_[enter] = dir > 0.0 ? 1 : 0;  // bound flip
            continue;
        }
        const std::size_t out = basis_[leave];
        pivot(leave, enter, entering_value);
        at_upper_[out] = leave_to_upper ? 1 : 0;
    }
}

void DenseSimplex::evict_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < first_artificial_) continue;
        std::size_t best_j = n_;
        double best = 1e-7;
        for (std::size_t j = 0; j < first_artificial_; ++j) {
            if (is_basic_[j]) continue;
            if (std::abs(t(r, j)) > best) {
                best = std::abs(t(r, j));
                best_j = j;
            }
        }
        if (best_j == n_) continue;  // redundant row; artificial stays basic at 0
        const double delta = beta_[r] / t(r, best_j);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != r) beta_[i] -= t(i, best_j) * delta;
        }
        pivot(r, best_j, nonbasic_value(best_j) + delta);
    }
}

std::vector<double> DenseSimplex::standard_values() const {
    std::vector<double> xs(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        if (!is_basic_[j]) xs[j] = nonbasic_value(j);
    }
    for (std::size_t i = 0; i < m_; ++i) xs[basis_[i]] = beta_[i];
    return xs;
}

void DenseSimplex::refine(std::vector<double>& xs, std::vector<double>& y_std) const {
    if (m_ == 0) return;
    std::vector<double> bmat(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t k = 0; k < m_; ++k) bmat[i * m_ + k] = a_[i * n_ + basis_[k]];
    }
    const DenseLu lu(std::move(bmat), m_);
    if (lu.singular()) return;
    std::vector<double> rhs = b_;
    for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j] || xs[j] == 0.0) continue;
        for (std::size_t i = 0; i < m_; ++i) rhs[i] -= a_[i * n_ + j] * xs[j];
    }
    const std::vector<double> xb = lu.solve(std::move(rhs));
    for (std::size_t k = 0; k < m_; ++k) xs[basis_[k]] = xb[k];
    std::vector<double> cb(m_);
    for (std::size_t k = 0; k < m_; ++k) cb[k] = cost_[basis_[k]];
    y_std = lu.solve_transposed(std::move(cb));
}

LPSolution DenseSimplex::run() {
    LPSolution sol;
    if (first_artificial_ < n_) {
        std::vector<double> phase1(n_, 0.0);
        for (std::size_t j = first_artificial_; j < n_; ++j) phase1[j] = 1.0;
        price(phase1);
        const Outcome o = iterate(false);
        sol.iterations = iterations_;
        if (o == Outcome::kIterationLimit) {
            sol.status = Status::kIterationLimit;
            return sol;
        }
        double infeas = 0.0;
        double bmax = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= first_artificial_) infeas += std::max(beta_[i], 0.0);
            bmax = std::max(bmax, std::abs(b_[i]));
        }
        if (infeas > 1e-7 * (1.0 + bmax)) {
            sol.status = Status::kInfeasible;
            return sol;
        }
        evict_artificials();
        for (std::size_t j = first_artificial_; j < n_; ++j) ub_[j] = 0.0;
    }

    price(cost_);
    const Outcome o = iterate(true);
    sol.iterations = iterations_;
    if (o == Outcome::kUnbounded) {
        sol.status = Status::kUnbounded;
        return sol;
    }
    if (o == Outcome::kIterationLimit) {
        sol.status = Status::kIterationLimit;
        return sol;
    }

    std::vector<double> xs = standard_values();
    std::vector<double> y_std;
    refine(xs, y_std);

    const auto& vars = lp_.variables();
    sol.values.resize(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const ColumnMap& cm = map_[j];
        double v = cm.shift + cm.sign * xs[static_cast<std::size_t>(cm.plus)];
        if (cm.minus >= 0) v -= xs[static_cast<std::size_t>(cm.minus)];
        // snap onto bounds the basis says are active
        v = std::clamp(v, vars[j].lower, vars[j].upper);
        sol.values[j] = v;
    }
    if (!y_std.empty()) {
        sol.duals.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = row_sign_[i] * y_std[i];
    }
    sol.objective = lp_.objective_value(sol.values);
    sol.max_residual = max_residual(lp_, sol.values);
    sol.status = sol.max_residual <= kResidualBound ? Status::kOptimal : Status::kNumericalFailure;
    return sol;
}

}  // namespace

LPSolution solve(const LinearProgram& lp, const SolveOptions& options) {
    lp.validate();
    DenseSimplex simplex(lp, options);
    return simplex.run();
}

}  // namespace pshave::lp
