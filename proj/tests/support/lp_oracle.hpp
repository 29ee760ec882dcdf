#pragma once

// Brute-force LP oracle for tiny programs: enumerate every basic solution
// (n active constraints out of rows + finite bounds), keep the feasible
// ones, return the best objective. Exponential; only for n <= 6.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "vpp/lp/linear_program.hpp"

namespace vpp::testing {

struct Hyperplane {
    std::vector<double> a;
    double b = 0.0;
};

inline std::optional<std::vector<double>> solveDense(std::vector<std::vector<double>> m,
                                                     std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-10) return std::nullopt;
        std::swap(m[piv], m[c]);
        std::swap(rhs[piv], rhs[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) rhs[c] /= m[c][c];
    return rhs;
}

/// Minimum objective over all feasible vertices; nullopt when none exists.
/// Assumes every variable has finite bounds (so the optimum is a vertex).
inline std::optional<double> vertexEnumerationOptimum(const lp::LinearProgram& p) {
    const std::size_t n = p.variableCount();
    std::vector<Hyperplane> planes;
    for (const auto& row : p.constraints()) {
        Hyperplane h{std::vector<double>(n, 0.0), row.rhs};
        for (const auto& t : row.terms) h.a[static_cast<std::size_t>(t.var)] = t.coef;
        planes.push_back(h);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto& v = p.variables()[j];
        for (double bound : {v.lower, v.upper}) {
            if (!std::isfinite(bound)) continue;
            Hyperplane h{std::vector<double>(n, 0.0), bound};
            h.a[j] = 1.0;
            planes.push_back(h);
        }
    }
    std::optional<double> best;
    const std::size_t k = planes.size();
    std::vector<std::size_t> pick(n);
    // iterate over all n-subsets of the k planes
    std::vector<bool> mask(k, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(n, k)), true);
    if (n == 0 || k < n) return best;
    do {
        std::vector<std::vector<double>> m;
        std::vector<double> rhs;
        for (std::size_t i = 0; i < k; ++i) {
            if (!mask[i]) continue;
            m.push_back(planes[i].a);
            rhs.push_back(planes[i].b);
        }
        auto x = solveDense(m, rhs);
        if (!x) continue;
        if (p.maxViolation(*x) > 1e-9) continue;
        const double obj = p.objectiveValue(*x);
        if (!best || obj < *best) best = obj;
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

/// Random feasible, bounded LP: box-bounded variables, rows built through
/// an interior point so the feasible set is nonempty.
inline lp::LinearProgram randomFeasibleLp(std::mt19937_64& rng, int maxVars = 6, int maxRows = 8) {
    std::uniform_int_distribution<int> nv(1, maxVars), nr(0, maxRows);
    std::uniform_real_distribution<double> coef(-5.0, 5.0), unit(0.0, 1.0);
    lp::LinearProgram p;
    const int n = nv(rng);
    std::vector<double> x0(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double lo = std::round(coef(rng));
        const double hi = lo + 1.0 + std::round(4.0 * unit(rng));
        p.addVariable(lo, hi);
        x0[static_cast<std::size_t>(j)] = lo + (hi - lo) * unit(rng);
        p.setObjectiveCoef(j, std::round(coef(rng) * 2.0) / 2.0);
    }
    const int m = nr(rng);
    for (int i = 0; i < m; ++i) {
        std::vector<lp::Term> terms;
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
            if (unit(rng) < 0.3) continue;
            const double a = std::round(coef(rng));
            if (a == 0.0) continue;
            terms.push_back({j, a});
            act += a * x0[static_cast<std::size_t>(j)];
        }
        const double pick = unit(rng);
        if (pick < 0.1) {
            p.addConstraint(terms, lp::Sense::Equal, act);
        } else if (pick < 0.55) {
            p.addConstraint(terms, lp::Sense::LessEqual, act + 2.0 * unit(rng));
        } else {
            p.addConstraint(terms, lp::Sense::GreaterEqual, act - 2.0 * unit(rng));
        }
    }
    return p;
}

}  // namespace vpp::testing
