#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpp/app/config.hpp"
#include "vpp/benders/benders.hpp"
#include "vpp/stochastic/model.hpp"

namespace vpp::app {

/// The extensive form would exceed `extensive_max_variables`.
class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that do not belong together (hash or shape mismatch).
class MismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolveOutcome {
    SolveMethod method = SolveMethod::Benders;
    stochastic::RiskMeasure risk;
    double objective = 0.0;
    bool converged = true;
    stochastic::FirstStageDecision firstStage;
    std::vector<market::CostBreakdown> breakdowns;
    std::vector<benders::ScenarioSeries> series;
    std::optional<benders::ConvergenceReport> report;  // Benders only
    double wallSeconds = 0.0;
};

/// Variables of the extensive form, counted from a one-scenario build.
std::size_t extensiveSize(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                          const stochastic::RiskMeasure& risk);

/// Throws SizeGuardError before building an oversized extensive form and
/// stochastic::InfeasibleModel when the model has no solution.
SolveOutcome solveInstance(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                           SolveMethod method, const stochastic::RiskMeasure& risk,
                           const benders::BendersOptions& options, std::size_t extensiveMaxVariables);

/// Identifies the inputs a persisted solution was computed from.
struct SolutionStamp {
    std::string configHash;
    std::string instanceHash;
    std::string scenarioHash;
};

/// Layout of <dir>:
///   solution.json       method, risk, objective, convergence, stamp
///   first_stage.csv     step, window, dam_kw, rcm_up_kw, rcm_dn_kw
///   breakdowns.csv      per-scenario streams as reported by the solver
///   series/scenario_NNNN.csv   second-stage primal series per step
///   trace.csv           Benders only
void writeSolution(const std::filesystem::path& dir, const SolveOutcome& outcome,
                   const stochastic::VppModel& model, const SolutionStamp& stamp);

struct PersistedSolution {
    SolveMethod method = SolveMethod::Benders;
    stochastic::RiskMeasure risk;
    double objective = 0.0;
    SolutionStamp stamp;
    stochastic::FirstStageDecision firstStage;
    std::vector<market::CostBreakdown> solverBreakdowns;
    std::vector<benders::ScenarioSeries> series;
};

PersistedSolution loadSolution(const std::filesystem::path& dir);

/// Per-scenario streams recomputed from persisted primal series and the
/// scenario prices, without touching the LP.
market::CostBreakdown recomputeBreakdown(const stochastic::VppModel& model, const scenario::Scenario& scenario,
                                         const stochastic::FirstStageDecision& first,
                                         const benders::ScenarioSeries& series);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double probability = 0.0;
};

struct ProfitReport {
    double expectedProfit = 0.0;
    double profitStdDev = 0.0;
    double costCvar = 0.0;
    double alpha = 0.9;
    market::CostBreakdown expectedStreams;  // probability-weighted
    double scheduledEnergy = 0.0;           // kWh bought day-ahead
    double withdrawnEnergy = 0.0;           // expected kWh imported at the PCC
    std::vector<double> scenarioProfit;
    std::vector<market::CostBreakdown> breakdowns;
    std::vector<HistogramBin> histogram;
    /// Largest |recomputed total - solver total| over scenarios.
    double reconciliationError = 0.0;
};

ProfitReport buildProfitReport(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                               const PersistedSolution& solution, double alpha, std::size_t bins = 20);

/// profit_report.json, profit_histogram.csv, streams.csv, scenario_profit.csv.
void writeProfitReport(const std::filesystem::path& dir, const ProfitReport& report, const SolutionStamp& stamp);

struct SweepRow {
    double swing = 0.0;
    bool ok = false;
    std::string error;
    double expectedProfit = 0.0;
    double lowWithdrawal = 0.0;   // expected sum of nodal withdrawals in the low window, kWh
    double highWithdrawal = 0.0;
    double lowPccImport = 0.0;    // expected net PCC import in the low window, kWh
    double highPccImport = 0.0;
    std::vector<double> withdrawalProfile;  // expected kW per step
    std::vector<double> pccProfile;         // expected kW per step, import positive
    bool converged = true;
};

/// Expected withdrawals of a solved outcome over the clock-hour windows.
SweepRow summarizeSweepLevel(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                             const SolveOutcome& outcome, const SweepSettings& sweep, double swing);

/// Risk-neutral solve per swing level on a shared scenario set. A level
/// that fails is recorded and the sweep continues.
std::vector<SweepRow> runTariffSweep(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                                     const SweepSettings& sweep, const benders::BendersOptions& options,
                                     std::size_t extensiveMaxVariables);

/// Relative change in percent against `base`; 0 when both are 0.
double percentChange(double value, double base);

/// tariff_sweep.csv (deltas against the first row), tariff_profiles.csv,
/// tariff_sweep.json.
void writeSweepReport(const std::filesystem::path& dir, const std::vector<SweepRow>& rows,
                      const stochastic::VppModel& model, const SweepSettings& sweep, const SolutionStamp& stamp);

}  // namespace vpp::app
