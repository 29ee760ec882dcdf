#include "vpp/lp/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vpp::lp {
namespace {

constexpr int kMaxPhaseFlips = 50;
constexpr double kFallbackPivotTol = 1e-13;
constexpr double kScaleSpread = 1e-6;

using SpMat = Eigen::SparseMatrix<double>;
using LuSolver = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

double powerOfTwo(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
    return std::exp2(std::round(std::log2(v)));
}

struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> entries;  // i != row
};

class SimplexRun {
public:
    SimplexRun(const LinearProgram& program, const SimplexOptions& options)
        : opt_(options), m_(static_cast<int>(program.constraintCount())),
          n_(static_cast<int>(program.variableCount())) {
        loadMatrix(program);
        if (opt_.scale) computeScaling();
        applyScaling(program);
        maxIter_ = opt_.maxIterations > 0 ? opt_.maxIterations : 50 * (m_ + n_) + 10000;
    }

    LpSolution run(const LinearProgram& program, const Basis* warm) {
        bool started = false;
        if (warm != nullptr) started = tryWarmStart(*warm);
        if (!started) coldStart();

        SolveStatus status = SolveStatus::Optimal;
        int restarts = 0;
        while (true) {
            status = iterate();
            if (status != SolveStatus::Optimal) break;
            // Final polish: fresh factorization and primal recomputation.
            if (!refactor()) throw SolverError("singular basis during final refactorization");
            computePrimal();
            if (maxInfeasibility() <= opt_.primalTol * 10.0) break;
            if (++restarts > 5) throw SolverError("primal feasibility lost after refactorization");
        }
        return buildSolution(program, status);
    }

private:
    // ---- setup -----------------------------------------------------------

    void loadMatrix(const LinearProgram& program) {
        const auto& rows = program.constraints();
        std::vector<int> counts(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& row : rows)
            for (const Term& t : row.terms) ++counts[static_cast<std::size_t>(t.var) + 1];
        colStart_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (int j = 0; j < n_; ++j) colStart_[j + 1] = colStart_[j] + counts[j + 1];
        rowIdx_.resize(static_cast<std::size_t>(colStart_[n_]));
        val_.resize(rowIdx_.size());
        std::vector<int> fill(colStart_.begin(), colStart_.end() - 1);
        for (int i = 0; i < m_; ++i) {
            for (const Term& t : rows[static_cast<std::size_t>(i)].terms) {
                const int p = fill[t.var]++;
                rowIdx_[p] = i;
                val_[p] = t.coef;
            }
        }
        rowScale_.assign(static_cast<std::size_t>(m_), 1.0);
        colScale_.assign(static_cast<std::size_t>(n_), 1.0);
    }

    void computeScaling() {
        for (int pass = 0; pass < 6; ++pass) {
            std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
            for (int j = 0; j < n_; ++j) {
                for (int p = colStart_[j]; p < colStart_[j + 1]; ++p) {
                    const double a = std::abs(val_[p] * rowScale_[rowIdx_[p]] * colScale_[j]);
                    rmin[rowIdx_[p]] = std::min(rmin[rowIdx_[p]], a);
                    rmax[rowIdx_[p]] = std::max(rmax[rowIdx_[p]], a);
                }
            }
            // Entries far below a line's largest one (rounding residue in
            // generated rows) must not drive the geometric mean.
            for (int i = 0; i < m_; ++i) {
                if (rmax[i] > 0.0) {
                    const double lo = std::max(rmin[i], rmax[i] * kScaleSpread);
                    rowScale_[i] *= powerOfTwo(1.0 / std::sqrt(lo * rmax[i]));
                }
            }
            for (int j = 0; j < n_; ++j) {
                double cmin = kInf, cmax = 0.0;
                for (int p = colStart_[j]; p < colStart_[j + 1]; ++p) {
                    const double a = std::abs(val_[p] * rowScale_[rowIdx_[p]] * colScale_[j]);
                    cmin = std::min(cmin, a);
                    cmax = std::max(cmax, a);
                }
                if (cmax > 0.0) colScale_[j] *= powerOfTwo(1.0 / std::sqrt(std::max(cmin, cmax * kScaleSpread) * cmax));
            }
        }
    }

    void applyScaling(const LinearProgram& program) {
        for (int j = 0; j < n_; ++j)
            for (int p = colStart_[j]; p < colStart_[j + 1]; ++p)
                val_[p] *= rowScale_[rowIdx_[p]] * colScale_[j];

        const int total = n_ + m_;
        lb_.assign(total, 0.0);
        ub_.assign(total, 0.0);
        cost_.assign(total, 0.0);
        const auto& vars = program.variables();
        for (int j = 0; j < n_; ++j) {
            lb_[j] = vars[j].lower / colScale_[j];
            ub_[j] = vars[j].upper / colScale_[j];
            cost_[j] = program.objective()[j] * colScale_[j];
        }
        const auto& rows = program.constraints();
        for (int i = 0; i < m_; ++i) {
            const double b = rows[i].rhs * rowScale_[i];
            switch (rows[i].sense) {
                case Sense::LessEqual: lb_[n_ + i] = -kInf; ub_[n_ + i] = b; break;
                case Sense::GreaterEqual: lb_[n_ + i] = b; ub_[n_ + i] = kInf; break;
                case Sense::Equal: lb_[n_ + i] = b; ub_[n_ + i] = b; break;
            }
        }
    }

    VarStatus restingStatus(int k) const {
        if (std::isfinite(lb_[k])) return VarStatus::AtLower;
        if (std::isfinite(ub_[k])) return VarStatus::AtUpper;
        return VarStatus::Free;
    }

    void setNonbasicValue(int k) {
        switch (status_[k]) {
            case VarStatus::AtLower: x_[k] = lb_[k]; break;
            case VarStatus::AtUpper: x_[k] = ub_[k]; break;
            case VarStatus::Free: x_[k] = 0.0; break;
            case VarStatus::Basic: break;
        }
    }

    void coldStart() {
        const int total = n_ + m_;
        status_.assign(total, VarStatus::AtLower);
        x_.assign(total, 0.0);
        head_.assign(m_, 0);
        pos_.assign(total, -1);
        for (int j = 0; j < n_; ++j) {
            status_[j] = restingStatus(j);
            setNonbasicValue(j);
        }
        for (int i = 0; i < m_; ++i) {
            head_[i] = n_ + i;
            pos_[n_ + i] = i;
            status_[n_ + i] = VarStatus::Basic;
        }
        if (!refactor()) throw SolverError("singular logical basis");
        computePrimal();
    }

    bool tryWarmStart(const Basis& warm) {
        const int total = n_ + m_;
        if (static_cast<int>(warm.status.size()) != total) return false;
        int basic = 0;
        for (VarStatus s : warm.status) basic += s == VarStatus::Basic ? 1 : 0;
        if (basic != m_) return false;
        status_ = warm.status;
        x_.assign(total, 0.0);
        head_.assign(m_, 0);
        pos_.assign(total, -1);
        int r = 0;
        for (int k = 0; k < total; ++k) {
            if (status_[k] == VarStatus::Basic) {
                head_[r] = k;
                pos_[k] = r++;
                continue;
            }
            if (status_[k] == VarStatus::AtLower && !std::isfinite(lb_[k])) status_[k] = restingStatus(k);
            if (status_[k] == VarStatus::AtUpper && !std::isfinite(ub_[k])) status_[k] = restingStatus(k);
            if (status_[k] == VarStatus::Free && (std::isfinite(lb_[k]) || std::isfinite(ub_[k])))
                status_[k] = restingStatus(k);
            setNonbasicValue(k);
        }
        if (!refactor()) return false;
        computePrimal();
        return true;
    }

    // ---- linear algebra ---------------------------------------------------

    bool refactor() {
        etas_.clear();
        if (m_ == 0) return true;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(m_) * 3);
        for (int r = 0; r < m_; ++r) {
            const int k = head_[r];
            if (k < n_) {
                for (int p = colStart_[k]; p < colStart_[k + 1]; ++p)
                    trip.emplace_back(rowIdx_[p], r, val_[p]);
            } else {
                trip.emplace_back(k - n_, r, -1.0);
            }
        }
        SpMat basis(m_, m_);
        basis.setFromTriplets(trip.begin(), trip.end());
        basis.makeCompressed();
        lu_ = std::make_unique<LuSolver>();
        lu_->analyzePattern(basis);
        lu_->factorize(basis);
        return lu_->info() == Eigen::Success;
    }

    void ftran(Eigen::VectorXd& v) const {
        if (m_ == 0) return;
        v = lu_->solve(v);
        for (const Eta& e : etas_) {
            const double vr = v[e.row] / e.pivot;
            v[e.row] = vr;
            if (vr != 0.0)
                for (const auto& [i, a] : e.entries) v[i] -= a * vr;
        }
    }

    void btran(Eigen::VectorXd& z) const {
        if (m_ == 0) return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double acc = z[it->row];
            for (const auto& [i, a] : it->entries) acc -= a * z[i];
            z[it->row] = acc / it->pivot;
        }
        z = lu_->transpose().solve(z);
    }

    void loadColumn(int k, Eigen::VectorXd& v) const {
        v.setZero(m_);
        if (k < n_) {
            for (int p = colStart_[k]; p < colStart_[k + 1]; ++p) v[rowIdx_[p]] = val_[p];
        } else {
            v[k - n_] = -1.0;
        }
    }

    double columnDot(int k, const Eigen::VectorXd& y) const {
        if (k >= n_) return -y[k - n_];
        double s = 0.0;
        for (int p = colStart_[k]; p < colStart_[k + 1]; ++p) s += val_[p] * y[rowIdx_[p]];
        return s;
    }

    void computePrimal() {
        if (m_ == 0) return;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
        for (int k = 0; k < n_ + m_; ++k) {
            if (status_[k] == VarStatus::Basic || x_[k] == 0.0) continue;
            if (k < n_) {
                for (int p = colStart_[k]; p < colStart_[k + 1]; ++p) w[rowIdx_[p]] -= val_[p] * x_[k];
            } else {
                w[k - n_] += x_[k];
            }
        }
        ftran(w);
        for (int r = 0; r < m_; ++r) x_[head_[r]] = w[r];
    }

    // ---- iteration --------------------------------------------------------

    double violation(int k) const {
        return std::max({0.0, lb_[k] - x_[k], x_[k] - ub_[k]});
    }

    double maxInfeasibility() const {
        double worst = 0.0;
        for (int r = 0; r < m_; ++r) worst = std::max(worst, violation(head_[r]));
        return worst;
    }

    /// Phase I costs on basic variables; returns the sum of infeasibilities.
    double phaseOneCosts(Eigen::VectorXd& cb) const {
        cb.setZero(m_);
        double sum = 0.0;
        for (int r = 0; r < m_; ++r) {
            const int k = head_[r];
            if (x_[k] < lb_[k] - opt_.primalTol) {
                cb[r] = -1.0;
                sum += lb_[k] - x_[k];
            } else if (x_[k] > ub_[k] + opt_.primalTol) {
                cb[r] = 1.0;
                sum += x_[k] - ub_[k];
            }
        }
        return sum;
    }

    double phaseTwoObjective() const {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += cost_[k] * x_[k];
        return s;
    }

    SolveStatus iterate() {
        Eigen::VectorXd y(m_), alpha(m_), cb(m_);
        double best[2] = {kInf, kInf};  // per phase: II, I
        int sinceProgress = 0;
        int flips = 0;
        bool bland = false;

        while (true) {
            if (iterations_ >= maxIter_) throw SolverError("simplex iteration limit reached");
            if (static_cast<int>(etas_.size()) >= opt_.refactorInterval) {
                if (!refactor()) throw SolverError("singular basis after refactorization");
                computePrimal();
            }

            const double infeas = phaseOneCosts(cb);
            const bool phaseOne = infeas > 0.0;
            if (!phaseOne)
                for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
            const double objective = phaseOne ? infeas : phaseTwoObjective();
            if (phaseOne != lastPhaseOne_) {
                lastPhaseOne_ = phaseOne;
                // Phase II pivots that reopen tiny infeasibilities can
                // alternate with the Phase I repair forever.
                if (++flips > kMaxPhaseFlips) throw SolverError("simplex oscillates between phases");
            }
            double& bestHere = best[phaseOne ? 1 : 0];
            if (objective < bestHere - 1e-11 * (1.0 + std::abs(bestHere))) {
                if (bestHere != kInf) flips = 0;
                bestHere = objective;
                sinceProgress = 0;
                bland = false;
            } else if (++sinceProgress > opt_.stallWindow) {
                bland = true;
            }

            y = cb;
            btran(y);

            // pricing
            int enter = -1;
            double enterD = 0.0, bestScore = 0.0;
            for (int k = 0; k < n_ + m_; ++k) {
                const VarStatus s = status_[k];
                if (s == VarStatus::Basic) continue;
                if (lb_[k] == ub_[k]) continue;
                const double ck = phaseOne ? 0.0 : cost_[k];
                const double d = ck - columnDot(k, y);
                bool eligible = false;
                if (s == VarStatus::AtLower) eligible = d < -opt_.dualTol;
                else if (s == VarStatus::AtUpper) eligible = d > opt_.dualTol;
                else eligible = std::abs(d) > opt_.dualTol;
                if (!eligible) continue;
                if (bland) {
                    enter = k;
                    enterD = d;
                    break;
                }
                if (std::abs(d) > bestScore) {
                    bestScore = std::abs(d);
                    enter = k;
                    enterD = d;
                }
            }
            if (enter < 0) {
                if (phaseOne) {
                    // recheck on a fresh factorization before certifying
                    if (!refactor()) throw SolverError("singular basis after refactorization");
                    computePrimal();
                    if (maxInfeasibility() > opt_.primalTol) {
                        if (recheckedInfeasible_) return SolveStatus::Infeasible;
                        recheckedInfeasible_ = true;
                    }
                    continue;
                }
                return SolveStatus::Optimal;
            }
            recheckedInfeasible_ = false;

            const double dir = enterD < 0.0 ? 1.0 : -1.0;
            loadColumn(enter, alpha);
            ftran(alpha);

            // ratio test
            double maxAlpha = 0.0;
            for (int r = 0; r < m_; ++r) maxAlpha = std::max(maxAlpha, std::abs(alpha[r]));
            const double pivTol = opt_.pivotTol * std::max(1.0, maxAlpha);

            struct Candidate {
                int row;
                double exact;   // step to the breakpoint
                double relaxed; // Harris-relaxed step
                double bound;
            };
            std::vector<Candidate> cands;
            for (int r = 0; r < m_; ++r) {
                const double a = alpha[r];
                if (std::abs(a) <= pivTol) continue;
                const int k = head_[r];
                const double rate = -dir * a;
                const double xv = x_[k];
                const double harris = lb_[k] == ub_[k] ? 0.0 : opt_.primalTol;
                if (rate < 0.0) {
                    double bound;
                    if (phaseOne && xv > ub_[k] + opt_.primalTol) bound = ub_[k];
                    else if (phaseOne && xv < lb_[k] - opt_.primalTol) continue;
                    else if (std::isfinite(lb_[k])) bound = lb_[k];
                    else continue;
                    cands.push_back({r, (xv - bound) / -rate, (xv - bound + harris) / -rate, bound});
                } else {
                    double bound;
                    if (phaseOne && xv < lb_[k] - opt_.primalTol) bound = lb_[k];
                    else if (phaseOne && xv > ub_[k] + opt_.primalTol) continue;
                    else if (std::isfinite(ub_[k])) bound = ub_[k];
                    else continue;
                    cands.push_back({r, (bound - xv) / rate, (bound - xv + harris) / rate, bound});
                }
            }

            const double range = ub_[enter] - lb_[enter];
            int leaveRow = -1;
            double theta = kInf, leaveBound = 0.0;
            if (!cands.empty()) {
                if (bland) {
                    double minExact = kInf;
                    for (const auto& c : cands) minExact = std::min(minExact, std::max(0.0, c.exact));
                    int bestVar = n_ + m_;
                    for (const auto& c : cands) {
                        if (std::max(0.0, c.exact) <= minExact + 1e-12 * (1.0 + minExact) &&
                            head_[c.row] < bestVar) {
                            bestVar = head_[c.row];
                            leaveRow = c.row;
                            leaveBound = c.bound;
                        }
                    }
                    theta = minExact;
                } else {
                    double thetaMax = kInf;
                    for (const auto& c : cands) thetaMax = std::min(thetaMax, c.relaxed);
                    double bestPivot = -1.0;
                    for (const auto& c : cands) {
                        if (c.exact <= thetaMax && std::abs(alpha[c.row]) > bestPivot) {
                            bestPivot = std::abs(alpha[c.row]);
                            leaveRow = c.row;
                            leaveBound = c.bound;
                            theta = std::max(0.0, c.exact);
                        }
                    }
                }
            }

            if (std::isfinite(range) && range <= theta) {
                // bound flip, basis unchanged
                theta = range;
                x_[enter] += dir * theta;
                status_[enter] = dir > 0.0 ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[enter] = dir > 0.0 ? ub_[enter] : lb_[enter];
                for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * theta * alpha[r];
                ++iterations_;
                continue;
            }
            if (leaveRow < 0) {
                if (phaseOne) throw SolverError("phase I direction without breakpoint");
                return SolveStatus::Unbounded;
            }

            x_[enter] += dir * theta;
            for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * theta * alpha[r];
            const int leave = head_[leaveRow];
            x_[leave] = leaveBound;
            if (lb_[leave] == ub_[leave] || leaveBound == lb_[leave]) status_[leave] = VarStatus::AtLower;
            else status_[leave] = VarStatus::AtUpper;
            pos_[leave] = -1;
            head_[leaveRow] = enter;
            pos_[enter] = leaveRow;
            status_[enter] = VarStatus::Basic;

            Eta eta;
            eta.row = leaveRow;
            eta.pivot = alpha[leaveRow];
            for (int r = 0; r < m_; ++r)
                if (r != leaveRow && alpha[r] != 0.0) eta.entries.emplace_back(r, alpha[r]);
            etas_.push_back(std::move(eta));
            ++iterations_;
        }
    }

    // ---- reporting ------------------------------------------------------

    LpSolution buildSolution(const LinearProgram& program, SolveStatus status) {
        LpSolution sol;
        sol.status = status;
        sol.iterations = iterations_;
        sol.primal.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) sol.primal[j] = x_[j] * colScale_[j];
        sol.basis.status = status_;
        sol.duals.assign(m_, 0.0);
        sol.reducedCosts.assign(n_, 0.0);
        if (status == SolveStatus::Optimal) {
            Eigen::VectorXd y(m_);
            for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
            btran(y);
            for (int i = 0; i < m_; ++i) sol.duals[i] = y[i] * rowScale_[i];
            for (int j = 0; j < n_; ++j)
                sol.reducedCosts[j] = (cost_[j] - columnDot(j, y)) / colScale_[j];
            // basic variables carry exact zero reduced cost
            for (int j = 0; j < n_; ++j)
                if (status_[j] == VarStatus::Basic) sol.reducedCosts[j] = 0.0;
            sol.objective = program.objectiveValue(sol.primal);
            const double viol = program.maxViolation(sol.primal);
            if (viol > opt_.feasTol) {
                throw SolverError("optimal basis violates feasibility tolerance by " +
                                  std::to_string(viol));
            }
            const double dualViol = dualInfeasibility(program, sol);
            if (dualViol > opt_.optTol) {
                throw SolverError("optimal basis violates dual feasibility by " +
                                  std::to_string(dualViol));
            }
        }
        return sol;
    }

    /// Largest sign violation of the unscaled reduced costs, relative to
    /// the largest cost coefficient.
    double dualInfeasibility(const LinearProgram& program, const LpSolution& sol) const {
        double worst = 0.0;
        auto check = [&](VarStatus s, double lo, double hi, double d) {
            if (s == VarStatus::Basic || lo == hi) return;
            if (s == VarStatus::AtLower) worst = std::max(worst, -d);
            else if (s == VarStatus::AtUpper) worst = std::max(worst, d);
            else worst = std::max(worst, std::abs(d));
        };
        const auto& vars = program.variables();
        double cmax = 1.0;
        for (double c : program.objective()) cmax = std::max(cmax, std::abs(c));
        for (int j = 0; j < n_; ++j) check(status_[j], vars[j].lower, vars[j].upper, sol.reducedCosts[j]);
        // logical column is -e_i, so its reduced cost is the row dual
        for (int i = 0; i < m_; ++i) check(status_[n_ + i], lb_[n_ + i], ub_[n_ + i], sol.duals[i]);
        return worst / cmax;
    }

    SimplexOptions opt_;
    int m_;
    int n_;
    int maxIter_ = 0;
    int iterations_ = 0;
    bool lastPhaseOne_ = true;
    bool recheckedInfeasible_ = false;

    std::vector<int> colStart_, rowIdx_;
    std::vector<double> val_;
    std::vector<double> rowScale_, colScale_;
    std::vector<double> lb_, ub_, cost_, x_;
    std::vector<VarStatus> status_;
    std::vector<int> head_, pos_;
    std::unique_ptr<LuSolver> lu_;
    std::vector<Eta> etas_;
};

}  // namespace

LpSolution SimplexSolver::solve(const LinearProgram& program, const Basis* warmStart) const {
    try {
        SimplexRun run(program, options_);
        return run.run(program, warmStart);
    } catch (const SolverError&) {
        if (!options_.scale && options_.pivotTol <= kFallbackPivotTol) throw;
    }
    // Fallbacks: unscaled from a cold start, then a tighter pivot threshold.
    SimplexOptions unscaled = options_;
    unscaled.scale = false;
    try {
        SimplexRun run(program, unscaled);
        return run.run(program, nullptr);
    } catch (const SolverError&) {
        if (unscaled.pivotTol <= kFallbackPivotTol) throw;
    }
    unscaled.pivotTol = kFallbackPivotTol;
    SimplexRun run(program, unscaled);
    return run.run(program, nullptr);
}

}  // namespace vpp::lp
