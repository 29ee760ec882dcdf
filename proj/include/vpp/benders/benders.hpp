#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

#include "vpp/lp/simplex.hpp"
#include "vpp/stochastic/model.hpp"
#include "vpp/stochastic/risk.hpp"

namespace vpp::benders {

inline constexpr double kThetaFloor = -1e7;

/// theta_s >= intercept + gradient . x over the flattened first stage.
struct OptimalityCut {
    std::size_t scenario = 0;
    double intercept = 0.0;
    std::vector<double> gradient;
};

/// Second-stage physical and market series of one scenario (kW per step).
struct ScenarioSeries {
    std::vector<double> pcc;         // import positive
    std::vector<double> vpp;         // delivery, export positive
    std::vector<double> withdrawal;  // sum of nodal withdrawals
    std::vector<double> ramUp;
    std::vector<double> ramDn;
    std::vector<double> imbShort;
    std::vector<double> imbLong;
    std::vector<double> storageCharge;     // BESS only
    std::vector<double> storageDischarge;  // BESS only
    // Per device, full horizon (EV entries are zero outside the event).
    std::vector<std::vector<double>> generatorPower;
    std::vector<std::vector<double>> evDischarge;
    std::vector<std::vector<double>> bessCharge;
    std::vector<std::vector<double>> bessDischarge;
};

struct SubproblemResult {
    double cost = 0.0;
    std::vector<double> gradient;
    market::CostBreakdown breakdown;
    ScenarioSeries series;
    int iterations = 0;
};

ScenarioSeries extractSeries(const stochastic::ScenarioBlock& block, const std::vector<double>& primal);

/// One scenario's recourse LP with local first-stage copies pinned by
/// equality rows. Keeps its last basis for warm starts.
class Subproblem {
public:
    Subproblem(const stochastic::VppModel& model, const scenario::Scenario& scenario);

    /// Throws std::logic_error when the recourse LP is not optimal, which
    /// would break the complete-recourse assumption.
    SubproblemResult solve(const std::vector<double>& xHat, const lp::SimplexOptions& options = {});

    [[nodiscard]] std::size_t firstStageSize() const { return fixRows_.size(); }

private:
    lp::LinearProgram program_;
    stochastic::ScenarioBlock block_;
    std::vector<int> fixRows_;
    lp::Basis basis_;
    bool haveBasis_ = false;
};

/// Multi-cut master over first-stage bids and one theta per scenario.
class MasterProblem {
public:
    MasterProblem(const stochastic::VppModel& model, const std::vector<double>& probabilities,
                  const stochastic::RiskMeasure& risk);

    /// Appends the cuts that are not already present within 1e-12 and
    /// returns how many rows were added.
    std::size_t addCuts(const std::vector<OptimalityCut>& cuts);

    struct Result {
        std::vector<double> x;
        double objective = 0.0;
    };
    Result solve(const lp::SimplexOptions& options = {});

    [[nodiscard]] std::size_t rowCount() const { return program_.constraintCount(); }
    [[nodiscard]] std::size_t firstStageSize() const { return first_.size(); }
    [[nodiscard]] const lp::LinearProgram& program() const { return program_; }

private:
    lp::LinearProgram program_;
    std::vector<int> first_;
    std::vector<int> theta_;
    std::vector<std::vector<OptimalityCut>> cuts_;
    lp::Basis basis_;
    bool haveBasis_ = false;
};

struct BendersOptions {
    double tolerance = 1e-6;
    int maxIterations = 200;
    std::size_t workers = 1;
    lp::SimplexOptions lp;
};

struct IterationRecord {
    int iteration = 0;
    double lowerBound = 0.0;
    double upperBound = 0.0;  // best so far
    double gap = 0.0;
    double wallSeconds = 0.0;
    std::size_t subproblems = 0;
    std::size_t cutsAdded = 0;
};

struct ConvergenceReport {
    bool converged = false;
    int iterations = 0;
    double lowerBound = -std::numeric_limits<double>::infinity();
    double upperBound = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    double wallSeconds = 0.0;
    std::vector<IterationRecord> trace;
};

struct BendersResult {
    stochastic::FirstStageDecision firstStage;
    std::vector<market::CostBreakdown> breakdowns;  // at the returned decision
    std::vector<ScenarioSeries> series;             // at the returned decision
    double objective = 0.0;                         // risk functional at the returned decision
    ConvergenceReport report;
};

/// Relative gap (UB - LB) / max(1, |UB|).
double relativeGap(double lower, double upper);

/// L-shaped loop. Subproblems run on `workers` threads and are merged by
/// scenario index, so the result does not depend on the worker count.
BendersResult solveBenders(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                           const stochastic::RiskMeasure& risk, const BendersOptions& options = {});

/// Solves every recourse problem at a fixed first stage. Used to evaluate a
/// decision independently of the solver that produced it.
std::vector<SubproblemResult> evaluateDecision(const stochastic::VppModel& model,
                                               const scenario::ScenarioSet& scenarios,
                                               const stochastic::FirstStageDecision& decision,
                                               std::size_t workers = 1, const lp::SimplexOptions& options = {});

/// Writes iteration, lower_bound, upper_bound, gap, wall_seconds.
std::string renderTrace(const ConvergenceReport& report);

}  // namespace vpp::benders
