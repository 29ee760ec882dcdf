#pragma once

#include <vector>

#include "vpp/lp/simplex.hpp"
#include "vpp/stochastic/model.hpp"
#include "vpp/stochastic/risk.hpp"

namespace vpp::stochastic {

/// Deterministic equivalent over all scenarios. Variables are laid out as
/// the first-stage block, then the CVaR threshold, then one block per
/// scenario in index order.
struct ExtensiveForm {
    lp::LinearProgram program;
    market::FirstStageHandles first;
    std::vector<ScenarioBlock> blocks;
    std::vector<double> probabilities;
    RiskMeasure risk;
    int gamma = -1;           // Cvar only
    std::vector<int> excess;  // Cvar only, per scenario
};

/// Throws std::invalid_argument on an empty scenario set or a scenario that
/// does not fit the model.
ExtensiveForm buildExtensive(const VppModel& model, const scenario::ScenarioSet& scenarios,
                             const RiskMeasure& risk);

struct ExtensiveSolution {
    FirstStageDecision firstStage;
    std::vector<market::CostBreakdown> breakdowns;
    double objective = 0.0;
    lp::LpSolution lp;
};

/// Throws InfeasibleModel naming the first scenario that is infeasible on
/// its own when the whole program is infeasible.
ExtensiveSolution solveExtensive(const ExtensiveForm& ef, const VppModel& model,
                                 const scenario::ScenarioSet& scenarios,
                                 const lp::SimplexOptions& options = {});

/// Per-scenario totals from a breakdown list.
std::vector<double> totals(const std::vector<market::CostBreakdown>& breakdowns);

}  // namespace vpp::stochastic
