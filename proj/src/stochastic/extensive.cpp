#include "vpp/stochastic/extensive.hpp"

#include <stdexcept>
#include <string>

namespace vpp::stochastic {

using lp::kInf;
using lp::LinearExpr;
using lp::Sense;

ExtensiveForm buildExtensive(const VppModel& model, const scenario::ScenarioSet& scenarios,
                             const RiskMeasure& risk) {
    if (scenarios.size() == 0) throw std::invalid_argument("empty scenario set");
    risk.validate();
    ExtensiveForm ef;
    ef.risk = risk;
    ef.first = market::declareFirstStage(ef.program, model.horizon, model.market);
    const bool cvar = risk.kind == RiskKind::Cvar;
    if (cvar) {
        ef.gamma = ef.program.addVariable(-kInf, kInf, "gamma").index;
        ef.program.setObjectiveCoef(ef.gamma, 1.0);
    }
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const auto& sc = scenarios.scenarios[s];
        model.checkScenario(sc);
        ef.probabilities.push_back(sc.probability);
        ef.blocks.push_back(emitScenarioBlock(ef.program, model, sc, ef.first));
        const LinearExpr& cost = ef.blocks.back().total;
        if (cvar) {
            const int y = ef.program.addVariable(0.0, kInf, "excess[" + std::to_string(s) + "]").index;
            ef.excess.push_back(y);
            ef.program.setObjectiveCoef(y, sc.probability / (1.0 - risk.alpha));
            // y >= C_s - gamma
            LinearExpr row;
            row.add(y, 1.0);
            row.add(ef.gamma, 1.0);
            row.add(cost, -1.0);
            ef.program.addConstraint(row, Sense::GreaterEqual, 0.0, "tail[" + std::to_string(s) + "]");
        } else {
            ef.program.addObjective(cost, sc.probability);
        }
    }
    return ef;
}

std::vector<double> totals(const std::vector<market::CostBreakdown>& breakdowns) {
    std::vector<double> out;
    out.reserve(breakdowns.size());
    for (const auto& b : breakdowns) out.push_back(b.total);
    return out;
}

ExtensiveSolution solveExtensive(const ExtensiveForm& ef, const VppModel& model,
                                 const scenario::ScenarioSet& scenarios, const lp::SimplexOptions& options) {
    const lp::SimplexSolver solver(options);
    ExtensiveSolution out;
    out.lp = solver.solve(ef.program);
    if (out.lp.status == lp::SolveStatus::Unbounded) {
        throw std::logic_error("extensive form unbounded; bid caps missing");
    }
    if (out.lp.status == lp::SolveStatus::Infeasible) {
        for (std::size_t s = 0; s < scenarios.size(); ++s) {
            lp::LinearProgram single;
            const auto first = market::declareFirstStage(single, model.horizon, model.market);
            emitScenarioBlock(single, model, scenarios.scenarios[s], first);
            if (solver.solve(single).status == lp::SolveStatus::Infeasible) {
                throw InfeasibleModel("scenario " + std::to_string(s) + " is infeasible on its own");
            }
        }
        throw InfeasibleModel("extensive form infeasible across scenario blocks");
    }
    out.objective = out.lp.objective;
    out.firstStage = readFirstStage(ef.first, out.lp.primal);
    for (const auto& b : ef.blocks) out.breakdowns.push_back(market::CostBreakdown::evaluate(b.costs, out.lp.primal));
    return out;
}

}  // namespace vpp::stochastic
