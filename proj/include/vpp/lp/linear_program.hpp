#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct VariableRef {
    int index = -1;
    double lower = 0.0;
    double upper = kInf;
    std::string name;
};

struct LinearConstraint {
    std::vector<Term> terms;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
    std::string name;
};

/// Affine expression sum(coef * x[var]) + constant. Used to carry cost
/// streams and constraint bodies before they are committed to a program.
class LinearExpr {
public:
    LinearExpr() = default;
    explicit LinearExpr(double constant) : constant_(constant) {}

    LinearExpr& add(int var, double coef);
    LinearExpr& add(const LinearExpr& other, double scale = 1.0);
    LinearExpr& addConstant(double value);

    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] double constant() const { return constant_; }
    [[nodiscard]] bool empty() const { return terms_.empty() && constant_ == 0.0; }

    /// Merges duplicate indices and drops exact zeros.
    [[nodiscard]] LinearExpr canonical() const;
    [[nodiscard]] double evaluate(std::span<const double> values) const;

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sparse minimization LP: min c'x  s.t.  rows, lower <= x <= upper.
class LinearProgram {
public:
    VariableRef addVariable(double lower, double upper, std::string name = {});

    /// Duplicate indices within `terms` are merged. Returns the row index.
    int addConstraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});
    /// Moves the expression constant to the right-hand side.
    int addConstraint(const LinearExpr& body, Sense sense, double rhs, std::string name = {});

    void setObjectiveCoef(int var, double coef);
    void addObjective(const LinearExpr& expr, double scale = 1.0);
    void setRhs(int row, double rhs);
    void setBounds(int var, double lower, double upper);

    [[nodiscard]] std::size_t variableCount() const { return variables_.size(); }
    [[nodiscard]] std::size_t constraintCount() const { return constraints_.size(); }
    [[nodiscard]] const std::vector<VariableRef>& variables() const { return variables_; }
    [[nodiscard]] const std::vector<LinearConstraint>& constraints() const { return constraints_; }
    [[nodiscard]] const std::vector<double>& objective() const { return objective_; }
    [[nodiscard]] double objectiveConstant() const { return objectiveConstant_; }
    [[nodiscard]] std::size_t nonzeroCount() const;

    [[nodiscard]] double objectiveValue(std::span<const double> x) const;
    /// Largest bound or row violation of `x`.
    [[nodiscard]] double maxViolation(std::span<const double> x) const;
    [[nodiscard]] double rowActivity(int row, std::span<const double> x) const;

private:
    void checkIndex(int var) const;

    std::vector<VariableRef> variables_;
    std::vector<LinearConstraint> constraints_;
    std::vector<double> objective_;
    double objectiveConstant_ = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* statusName(SolveStatus status);

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, Free };

/// Simplex basis over structural columns followed by one logical per row.
struct Basis {
    std::vector<VarStatus> status;
};

struct LpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;
    /// One per row. Minimization convention: >= rows nonnegative,
    /// <= rows nonpositive, = rows free.
    std::vector<double> duals;
    std::vector<double> reducedCosts;
    int iterations = 0;
    Basis basis;
};

/// Dual objective rebuilt from the row duals alone: sum(y*b) plus the bound
/// contributions of the structural reduced costs c - A'y.
double dualObjective(const LinearProgram& program, const LpSolution& solution);

}  // namespace vpp::lp
