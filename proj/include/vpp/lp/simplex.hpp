#pragma once

#include <stdexcept>

#include "vpp/lp/linear_program.hpp"

namespace vpp::lp {

/// Raised when the simplex cannot produce a certified status: singular basis
/// after the refactorization retries, or the iteration limit.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimplexOptions {
    /// Contract tolerances checked on the unscaled answer.
    double feasTol = 1e-7;
    double optTol = 1e-7;
    /// Working tolerances inside the scaled problem.
    double primalTol = 1e-9;
    double dualTol = 1e-9;
    double pivotTol = 1e-9;
    int maxIterations = 0;  // 0: 50 * (rows + columns) + 10000
    int refactorInterval = 100;
    /// Iterations without objective progress before Bland's rule engages.
    int stallWindow = 300;
    bool scale = true;
};

/// Bounded primal revised simplex (Phase I / Phase II). Every row gets a
/// logical column, free variables stay nonbasic at zero until priced in.
class SimplexSolver {
public:
    explicit SimplexSolver(SimplexOptions options = {}) : options_(options) {}

    /// `warmStart` is optional; an unusable basis silently falls back to the
    /// all-logical start.
    [[nodiscard]] LpSolution solve(const LinearProgram& program,
                                   const Basis* warmStart = nullptr) const;

    [[nodiscard]] const SimplexOptions& options() const { return options_; }

private:
    SimplexOptions options_;
};

inline LpSolution solve(const LinearProgram& program) { return SimplexSolver{}.solve(program); }

}  // namespace vpp::lp
