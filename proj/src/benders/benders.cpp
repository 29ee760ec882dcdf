#include "vpp/benders/benders.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "vpp/io/csv.hpp"

namespace vpp::benders {

using lp::kInf;

namespace {
constexpr double kGradientNoise = 1e-12;
}  // namespace

using lp::LinearExpr;
using lp::Sense;

Subproblem::Subproblem(const stochastic::VppModel& model, const scenario::Scenario& scenario) {
    model.checkScenario(scenario);
    market::FirstStageHandles copies;
    const auto& h = model.horizon;
    for (std::size_t t = 0; t < h.stepCount; ++t) {
        copies.dam.push_back(program_.addVariable(-kInf, kInf, "x_dam[" + std::to_string(t) + "]").index);
    }
    for (std::size_t w = 0; w < h.windowCount(); ++w) {
        copies.rcmUp.push_back(program_.addVariable(-kInf, kInf, "x_rcm_up[" + std::to_string(w) + "]").index);
    }
    for (std::size_t w = 0; w < h.windowCount(); ++w) {
        copies.rcmDn.push_back(program_.addVariable(-kInf, kInf, "x_rcm_dn[" + std::to_string(w) + "]").index);
    }
    for (int j : copies.all()) {
        fixRows_.push_back(program_.addConstraint({{j, 1.0}}, Sense::Equal, 0.0, "fix[" + std::to_string(j) + "]"));
    }
    block_ = stochastic::emitScenarioBlock(program_, model, scenario, copies);
    program_.addObjective(block_.total);
}

SubproblemResult Subproblem::solve(const std::vector<double>& xHat, const lp::SimplexOptions& options) {
    if (xHat.size() != fixRows_.size()) throw std::invalid_argument("first-stage vector has the wrong size");
    for (std::size_t k = 0; k < fixRows_.size(); ++k) program_.setRhs(fixRows_[k], xHat[k]);
    const lp::SimplexSolver solver(options);
    lp::LpSolution sol = solver.solve(program_, haveBasis_ ? &basis_ : nullptr);
    if (sol.status == lp::SolveStatus::Infeasible) {
        throw stochastic::InfeasibleModel("recourse subproblem infeasible at the proposed bids");
    }
    if (sol.status != lp::SolveStatus::Optimal) {
        throw std::logic_error(std::string("recourse subproblem ") + lp::statusName(sol.status) +
                               "; complete recourse violated");
    }
    basis_ = sol.basis;
    haveBasis_ = true;
    SubproblemResult r;
    r.cost = sol.objective;
    r.iterations = sol.iterations;
    double largest = 0.0;
    for (int row : fixRows_) {
        r.gradient.push_back(sol.duals[static_cast<std::size_t>(row)]);
        largest = std::max(largest, std::abs(r.gradient.back()));
    }
    // rounding residue of exact zeros
    for (double& g : r.gradient) {
        if (std::abs(g) <= kGradientNoise * std::max(1.0, largest)) g = 0.0;
    }
    r.breakdown = market::CostBreakdown::evaluate(block_.costs, sol.primal);
    r.series = extractSeries(block_, sol.primal);
    return r;
}

ScenarioSeries extractSeries(const stochastic::ScenarioBlock& block, const std::vector<double>& primal) {
    const auto value = [&primal](int j) { return primal[static_cast<std::size_t>(j)]; };
    const auto values = [&value](const std::vector<int>& idx) {
        std::vector<double> v;
        v.reserve(idx.size());
        for (int j : idx) v.push_back(value(j));
        return v;
    };
    ScenarioSeries s;
    s.pcc = values(block.grid.pcc);
    s.vpp = values(block.market.vpp);
    s.ramUp = values(block.market.ramUp);
    s.ramDn = values(block.market.ramDn);
    s.imbShort = values(block.market.imbShort);
    s.imbLong = values(block.market.imbLong);
    const std::size_t steps = s.pcc.size();
    s.withdrawal.assign(steps, 0.0);
    for (const auto& node : block.grid.withdrawal)
        for (std::size_t t = 0; t < steps; ++t) s.withdrawal[t] += value(node[t]);
    s.storageCharge.assign(steps, 0.0);
    s.storageDischarge.assign(steps, 0.0);
    for (const auto& b : block.park.batteries) {
        s.bessCharge.push_back(values(b.charge));
        s.bessDischarge.push_back(values(b.discharge));
        for (std::size_t t = 0; t < steps; ++t) {
            s.storageCharge[t] += s.bessCharge.back()[t];
            s.storageDischarge[t] += s.bessDischarge.back()[t];
        }
    }
    for (const auto& g : block.park.generators) s.generatorPower.push_back(values(g.p));
    for (const auto& ev : block.park.evEvents) {
        std::vector<double> d(steps, 0.0);
        for (std::size_t k = 0; k < ev.discharge.size(); ++k)
            d[static_cast<std::size_t>(ev.firstStep) + k] = value(ev.discharge[k]);
        s.evDischarge.push_back(std::move(d));
    }
    return s;
}

MasterProblem::MasterProblem(const stochastic::VppModel& model, const std::vector<double>& probabilities,
                             const stochastic::RiskMeasure& risk) {
    risk.validate();
    const auto first = market::declareFirstStage(program_, model.horizon, model.market);
    first_ = first.all();
    cuts_.resize(probabilities.size());
    int gamma = -1;
    if (risk.kind == stochastic::RiskKind::Cvar) {
        gamma = program_.addVariable(-kInf, kInf, "gamma").index;
        program_.setObjectiveCoef(gamma, 1.0);
    }
    for (std::size_t s = 0; s < probabilities.size(); ++s) {
        const int th = program_.addVariable(kThetaFloor, kInf, "theta[" + std::to_string(s) + "]").index;
        theta_.push_back(th);
        if (risk.kind == stochastic::RiskKind::Cvar) {
            const int y = program_.addVariable(0.0, kInf, "excess[" + std::to_string(s) + "]").index;
            program_.setObjectiveCoef(y, probabilities[s] / (1.0 - risk.alpha));
            program_.addConstraint({{y, 1.0}, {gamma, 1.0}, {th, -1.0}}, Sense::GreaterEqual, 0.0,
                                   "tail[" + std::to_string(s) + "]");
        } else {
            program_.setObjectiveCoef(th, probabilities[s]);
        }
    }
}

std::size_t MasterProblem::addCuts(const std::vector<OptimalityCut>& cuts) {
    std::size_t added = 0;
    for (const auto& cut : cuts) {
        if (cut.gradient.size() != first_.size()) throw std::invalid_argument("cut gradient has the wrong size");
        auto& pool = cuts_.at(cut.scenario);
        const bool duplicate = std::any_of(pool.begin(), pool.end(), [&cut](const OptimalityCut& c) {
            if (std::abs(c.intercept - cut.intercept) > 1e-12) return false;
            for (std::size_t k = 0; k < c.gradient.size(); ++k) {
                if (std::abs(c.gradient[k] - cut.gradient[k]) > 1e-12) return false;
            }
            return true;
        });
        if (duplicate) continue;
        // theta - g.x >= intercept
        std::vector<lp::Term> row{{theta_[cut.scenario], 1.0}};
        for (std::size_t k = 0; k < first_.size(); ++k) {
            if (cut.gradient[k] != 0.0) row.push_back({first_[k], -cut.gradient[k]});
        }
        program_.addConstraint(std::move(row), Sense::GreaterEqual, cut.intercept,
                               "cut[" + std::to_string(cut.scenario) + "]");
        pool.push_back(cut);
        if (haveBasis_) basis_.status.push_back(lp::VarStatus::Basic);
        ++added;
    }
    return added;
}

MasterProblem::Result MasterProblem::solve(const lp::SimplexOptions& options) {
    const lp::SimplexSolver solver(options);
    lp::LpSolution sol = solver.solve(program_, haveBasis_ ? &basis_ : nullptr);
    if (sol.status == lp::SolveStatus::Infeasible) {
        throw stochastic::InfeasibleModel("recourse subproblem infeasible at the proposed bids");
    }
    if (sol.status != lp::SolveStatus::Optimal) {
        throw std::logic_error(std::string("master problem ") + lp::statusName(sol.status));
    }
    basis_ = sol.basis;
    haveBasis_ = true;
    Result r;
    r.objective = sol.objective;
    for (int j : first_) r.x.push_back(sol.primal[static_cast<std::size_t>(j)]);
    return r;
}

double relativeGap(double lower, double upper) { return (upper - lower) / std::max(1.0, std::abs(upper)); }

namespace {

/// Runs job(s) for every scenario index on `workers` threads.
template <class Job>
void forEachScenario(std::size_t count, std::size_t workers, Job&& scenarioJob) {
    const auto job = [&scenarioJob](std::size_t s) {
        try {
            scenarioJob(s);
        } catch (const stochastic::InfeasibleModel& e) {
            throw stochastic::InfeasibleModel("scenario " + std::to_string(s) + ": " + e.what());
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t s = 0; s < count; ++s) job(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t s = next++; s < count; s = next++) job(s);
            } catch (...) {
                errors[w] = std::current_exception();
                next = count;
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

BendersResult solveBenders(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                           const stochastic::RiskMeasure& risk, const BendersOptions& options) {
    if (scenarios.size() == 0) throw std::invalid_argument("empty scenario set");
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("Benders tolerance must be positive");
    risk.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const std::size_t n = scenarios.size();
    std::vector<double> probs;
    for (const auto& s : scenarios.scenarios) probs.push_back(s.probability);
    std::vector<std::unique_ptr<Subproblem>> subs(n);
    forEachScenario(n, options.workers, [&](std::size_t s) {
        subs[s] = std::make_unique<Subproblem>(model, scenarios.scenarios[s]);
    });
    MasterProblem master(model, probs, risk);

    BendersResult best;
    ConvergenceReport& report = best.report;
    std::vector<SubproblemResult> results(n);
    for (int it = 1; it <= options.maxIterations; ++it) {
        const auto m = master.solve(options.lp);
        report.lowerBound = std::max(report.lowerBound, m.objective);

        forEachScenario(n, options.workers, [&](std::size_t s) { results[s] = subs[s]->solve(m.x, options.lp); });

        std::vector<double> costs(n);
        std::vector<OptimalityCut> cuts;
        for (std::size_t s = 0; s < n; ++s) {
            costs[s] = results[s].cost;
            OptimalityCut cut{s, results[s].cost, results[s].gradient};
            for (std::size_t k = 0; k < m.x.size(); ++k) cut.intercept -= cut.gradient[k] * m.x[k];
            cuts.push_back(std::move(cut));
        }
        const double value = stochastic::riskOfSamples(risk, costs, probs);
        if (value < report.upperBound) {
            report.upperBound = value;
            best.objective = value;
            best.firstStage = stochastic::FirstStageDecision::unflatten(m.x, model.horizon.stepCount,
                                                                        model.horizon.windowCount());
            best.breakdowns.clear();
            best.series.clear();
            for (const auto& r : results) {
                best.breakdowns.push_back(r.breakdown);
                best.series.push_back(r.series);
            }
        }
        report.gap = relativeGap(report.lowerBound, report.upperBound);
        report.iterations = it;

        IterationRecord rec{it, report.lowerBound, report.upperBound, report.gap, 0.0, n, 0};
        if (report.gap <= options.tolerance) {
            report.converged = true;
            rec.wallSeconds = elapsed();
            report.trace.push_back(rec);
            break;
        }
        rec.cutsAdded = master.addCuts(cuts);
        rec.wallSeconds = elapsed();
        report.trace.push_back(rec);
        if (rec.cutsAdded == 0) break;  // no new information; the loop would stall
    }
    report.wallSeconds = elapsed();
    return best;
}

std::vector<SubproblemResult> evaluateDecision(const stochastic::VppModel& model,
                                               const scenario::ScenarioSet& scenarios,
                                               const stochastic::FirstStageDecision& decision,
                                               std::size_t workers, const lp::SimplexOptions& options) {
    const auto x = decision.flatten();
    std::vector<SubproblemResult> out(scenarios.size());
    forEachScenario(scenarios.size(), workers, [&](std::size_t s) {
        Subproblem sub(model, scenarios.scenarios[s]);
        out[s] = sub.solve(x, options);
    });
    return out;
}

std::string renderTrace(const ConvergenceReport& report) {
    std::ostringstream out;
    io::CsvWriter w(out);
    w.header({"iteration", "lower_bound", "upper_bound", "gap", "wall_seconds", "subproblems", "cuts_added"});
    for (const auto& r : report.trace) {
        w.cell(r.iteration).cell(r.lowerBound).cell(r.upperBound).cell(r.gap).cell(r.wallSeconds)
            .cell(static_cast<long long>(r.subproblems)).cell(static_cast<long long>(r.cutsAdded));
        w.endRow();
    }
    return out.str();
}

}  // namespace vpp::benders
