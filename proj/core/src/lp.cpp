#include "pshave/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pshave/error.hpp"
#include "pshave/format.hpp"

namespace pshave::lp {

namespace {

std::string lp_name(const std::string& name, char prefix, std::size_t index) {
    if (name.empty()) {
        return prefix + std::to_string(index);
    }
    std::string out;
    out.reserve(name.size());
    for (char ch : name) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
        out.push_back(ok ? ch : '_');
    }
    if (out.front() >= '0' && out.front() <= '9') {
        out.insert(out.begin(), prefix);
    }
    return out;
}

void write_terms(std::ostream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
    bool first = true;
    for (const Term& t : terms) {
        if (t.coef == 0.0) continue;
        const double mag = std::abs(t.coef);
        if (first) {
            os << (t.coef < 0 ? "- " : "");
        } else {
            os << (t.coef < 0 ? " - " : " + ");
        }
        if (mag != 1.0) os << format_number(mag) << ' ';
        os << names[static_cast<std::size_t>(t.var)];
        first = false;
    }
    if (first) os << "0 " << (names.empty() ? "x0" : names.front());
}

}  // namespace

int LinearProgram::add_variable(std::string name, double lower, double upper, double cost) {
    vars_.push_back({std::move(name), lower, upper, cost});
    return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Sense sense, double rhs,
                                  std::string name) {
    rows_.push_back({std::move(terms), sense, rhs, std::move(name)});
    return static_cast<int>(rows_.size()) - 1;
}

double LinearProgram::objective_value(std::span<const double> x) const {
    double obj = offset_;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        obj += vars_[j].cost * x[j];
    }
    return obj;
}

void LinearProgram::validate() const {
    for (const Variable& v : vars_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
            v.lower == kInf || v.upper == -kInf || !std::isfinite(v.cost)) {
            throw Error(ErrorCode::kValidation, "LP variable '" + v.name + "' has invalid bounds");
        }
    }
    for (const Constraint& c : rows_) {
        if (!std::isfinite(c.rhs)) {
            throw Error(ErrorCode::kValidation, "LP constraint '" + c.name + "' has non-finite rhs");
        }
        for (const Term& t : c.terms) {
            if (t.var < 0 || t.var >= num_variables() || !std::isfinite(t.coef)) {
                throw Error(ErrorCode::kValidation,
                            "LP constraint '" + c.name + "' references an undeclared variable");
            }
        }
    }
}

const char* to_string(Status status) {
    switch (status) {
        case Status::kOptimal: return "Optimal";
        case Status::kInfeasible: return "Infeasible";
        case Status::kUnbounded: return "Unbounded";
        case Status::kIterationLimit: return "IterationLimit";
        case Status::kNumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

double max_residual(const LinearProgram& lp, std::span<const double> x) {
    double worst = 0.0;
    for (const Constraint& c : lp.constraints()) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * x[static_cast<std::size_t>(t.var)];
        double viol = 0.0;
        switch (c.sense) {
            case Sense::kLessEqual: viol = std::max(0.0, lhs - c.rhs); break;
            case Sense::kGreaterEqual: viol = std::max(0.0, c.rhs - lhs); break;
            case Sense::kEqual: viol = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, viol / (1.0 + std::abs(c.rhs)));
    }
    const auto& vars = lp.variables();
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (x[j] < vars[j].lower) {
            worst = std::max(worst, (vars[j].lower - x[j]) / (1.0 + std::abs(vars[j].lower)));
        }
        if (x[j] > vars[j].upper) {
            worst = std::max(worst, (x[j] - vars[j].upper) / (1.0 + std::abs(vars[j].upper)));
        }
    }
    return worst;
}

double dual_objective(const LinearProgram& lp, std::span<const double> duals) {
    const auto& vars = lp.variables();
    std::vector<double> reduced(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) reduced[j] = vars[j].cost;
    double obj = lp.objective_offset();
    const auto& rows = lp.constraints();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        obj += rows[i].rhs * duals[i];
        for (const Term& t : rows[i].terms) {
            reduced[static_cast<std::size_t>(t.var)] -= t.coef * duals[i];
        }
    }
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const double r = reduced[j];
        if (r > 0.0) {
            if (vars[j].lower == -kInf) return -kInf;
            obj += r * vars[j].lower;
        } else if (r < 0.0) {
            if (vars[j].upper == kInf) return -kInf;
            obj += r * vars[j].upper;
        }
    }
    return obj;
}

void write_lp_format(const LinearProgram& lp, std::ostream& os) {
    const auto& vars = lp.variables();
    std::vector<std::string> names;
    names.reserve(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) names.push_back(lp_name(vars[j].name, 'x', j));

    os << "\\ objective offset " << format_number(lp.objective_offset()) << '\n';
    os << "Minimize\n obj: ";
    std::vector<Term> obj;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (vars[j].cost != 0.0) obj.push_back({static_cast<int>(j), vars[j].cost});
    }
    write_terms(os, obj, names);
    os << "\nSubject To\n";
    const auto& rows = lp.constraints();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << ' ' << lp_name(rows[i].name, 'c', i) << ": ";
        write_terms(os, rows[i].terms, names);
        switch (rows[i].sense) {
            case Sense::kLessEqual: os << " <= "; break;
            case Sense::kGreaterEqual: os << " >= "; break;
            case Sense::kEqual: os << " = "; break;
        }
        os << format_number(rows[i].rhs) << '\n';
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const Variable& v = vars[j];
        if (v.lower == -kInf && v.upper == kInf) {
            os << ' ' << names[j] << " free\n";
        } else if (v.lower == -kInf) {
            os << " -inf <= " << names[j] << " <= " << format_number(v.upper) << '\n';
        } else if (v.upper == kInf) {
            os << ' ' << names[j] << " >= " << format_number(v.lower) << '\n';
        } else {
            os << ' ' << format_number(v.lower) << " <= " << names[j]
               << " <= " << format_number(v.upper) << '\n';
        }
    }
    os << "End\n";
}

Backend default_backend() {
    return [](const LinearProgram& lp, const SolveOptions& options) { return solve(lp, options); };
}

}  // namespace pshave::lp
