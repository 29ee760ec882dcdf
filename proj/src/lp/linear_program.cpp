#include "vpp/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vpp::lp {

LinearExpr& LinearExpr::add(int var, double coef) {
    terms_.push_back({var, coef});
    return *this;
}

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
    terms_.reserve(terms_.size() + other.terms_.size());
    for (const Term& t : other.terms_) terms_.push_back({t.var, t.coef * scale});
    constant_ += other.constant_ * scale;
    return *this;
}

LinearExpr& LinearExpr::addConstant(double value) {
    constant_ += value;
    return *this;
}

LinearExpr LinearExpr::canonical() const {
    std::vector<Term> sorted = terms_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    LinearExpr out(constant_);
    for (const Term& t : sorted) {
        if (!out.terms_.empty() && out.terms_.back().var == t.var) {
            out.terms_.back().coef += t.coef;
        } else {
            out.terms_.push_back(t);
        }
    }
    std::erase_if(out.terms_, [](const Term& t) { return t.coef == 0.0; });
    return out;
}

double LinearExpr::evaluate(std::span<const double> values) const {
    double sum = constant_;
    for (const Term& t : terms_) sum += t.coef * values[static_cast<std::size_t>(t.var)];
    return sum;
}

VariableRef LinearProgram::addVariable(double lower, double upper, std::string name) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
        throw ModelError("inverted or NaN bounds on variable '" + name + "'");
    }
    if (lower == kInf || upper == -kInf) {
        throw ModelError("variable '" + name + "' has an empty domain");
    }
    VariableRef ref{static_cast<int>(variables_.size()), lower, upper, std::move(name)};
    variables_.push_back(ref);
    objective_.push_back(0.0);
    return ref;
}

void LinearProgram::checkIndex(int var) const {
    if (var < 0 || static_cast<std::size_t>(var) >= variables_.size()) {
        throw ModelError("reference to undeclared variable " + std::to_string(var));
    }
}

int LinearProgram::addConstraint(std::vector<Term> terms, Sense sense, double rhs,
                                 std::string name) {
    if (!std::isfinite(rhs)) throw ModelError("non-finite rhs in row '" + name + "'");
    for (const Term& t : terms) {
        checkIndex(t.var);
        if (!std::isfinite(t.coef)) {
            throw ModelError("non-finite coefficient in row '" + name + "'");
        }
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    constraints_.push_back({std::move(merged), sense, rhs, std::move(name)});
    return static_cast<int>(constraints_.size()) - 1;
}

int LinearProgram::addConstraint(const LinearExpr& body, Sense sense, double rhs,
                                 std::string name) {
    return addConstraint(body.terms(), sense, rhs - body.constant(), std::move(name));
}

void LinearProgram::setObjectiveCoef(int var, double coef) {
    checkIndex(var);
    objective_[static_cast<std::size_t>(var)] = coef;
}

void LinearProgram::addObjective(const LinearExpr& expr, double scale) {
    for (const Term& t : expr.terms()) {
        checkIndex(t.var);
        objective_[static_cast<std::size_t>(t.var)] += scale * t.coef;
    }
    objectiveConstant_ += scale * expr.constant();
}

void LinearProgram::setRhs(int row, double rhs) {
    if (row < 0 || static_cast<std::size_t>(row) >= constraints_.size()) {
        throw ModelError("row index out of range");
    }
    if (!std::isfinite(rhs)) throw ModelError("non-finite rhs");
    constraints_[static_cast<std::size_t>(row)].rhs = rhs;
}

void LinearProgram::setBounds(int var, double lower, double upper) {
    checkIndex(var);
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
        throw ModelError("inverted bounds on variable " + std::to_string(var));
    }
    auto& v = variables_[static_cast<std::size_t>(var)];
    v.lower = lower;
    v.upper = upper;
}

std::size_t LinearProgram::nonzeroCount() const {
    std::size_t nnz = 0;
    for (const auto& c : constraints_) nnz += c.terms.size();
    return nnz;
}

double LinearProgram::objectiveValue(std::span<const double> x) const {
    double sum = objectiveConstant_;
    for (std::size_t j = 0; j < objective_.size(); ++j) sum += objective_[j] * x[j];
    return sum;
}

double LinearProgram::rowActivity(int row, std::span<const double> x) const {
    double sum = 0.0;
    for (const Term& t : constraints_[static_cast<std::size_t>(row)].terms) {
        sum += t.coef * x[static_cast<std::size_t>(t.var)];
    }
    return sum;
}

double LinearProgram::maxViolation(std::span<const double> x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        worst = std::max({worst, variables_[j].lower - x[j], x[j] - variables_[j].upper});
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        const double act = rowActivity(static_cast<int>(i), x);
        const auto& c = constraints_[i];
        switch (c.sense) {
            case Sense::LessEqual: worst = std::max(worst, act - c.rhs); break;
            case Sense::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
            case Sense::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
        }
    }
    return worst;
}

const char* statusName(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

double dualObjective(const LinearProgram& program, const LpSolution& solution) {
    if (solution.status != SolveStatus::Optimal) {
        throw std::logic_error("dual objective requested for a non-optimal solution");
    }
    const auto& rows = program.constraints();
    const auto& vars = program.variables();
    std::vector<double> reduced(program.objective());
    double value = program.objectiveConstant();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = solution.duals[i];
        value += y * rows[i].rhs;
        for (const Term& t : rows[i].terms) reduced[static_cast<std::size_t>(t.var)] -= y * t.coef;
    }
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const double d = reduced[j];
        if (d > 0.0 && std::isfinite(vars[j].lower)) {
            value += d * vars[j].lower;
        } else if (d < 0.0 && std::isfinite(vars[j].upper)) {
            value += d * vars[j].upper;
        } else {
            // numerically zero reduced cost on an unbounded side
            value += d * solution.primal[j];
        }
    }
    return value;
}

}  // namespace vpp::lp
