#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "vpp/app/config.hpp"
#include "vpp/app/reports.hpp"
#include "vpp/app/synthetic.hpp"
#include "vpp/scenario/scenario_io.hpp"
#include "vpp/stochastic/model.hpp"

namespace fs = std::filesystem;
using namespace vpp;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;
constexpr int kNotConverged = 4;

/// Scenario set for `config`, refusing sets generated for another instance.
scenario::ScenarioSet loadScenarios(const app::RunConfig& config) {
    if (!fs::exists(config.scenarioDir / "manifest.json"))
        throw app::MismatchError("no scenario set in " + config.scenarioDir.string() +
                                 "; run generate-scenarios first");
    const auto tags = scenario::manifestTags(config.scenarioDir);
    const auto it = tags.find("instance_hash");
    if (it == tags.end() || it->second != config.instanceHash)
        throw app::MismatchError("scenario set in " + config.scenarioDir.string() +
                                 " was generated for a different instance");
    auto set = scenario::loadScenarioSet(config.scenarioDir);
    if (set.scenarios.front().series.stepCount() != config.steps)
        throw app::MismatchError("scenario step count differs from horizon.steps");
    return set;
}

app::SolutionStamp stampFor(const app::RunConfig& config) {
    return {config.configHash, config.instanceHash, scenario::manifestHash(config.scenarioDir)};
}

struct GenerateArgs {
    std::string config;
    std::optional<long long> count;
    std::optional<std::uint64_t> seed;
};

int generateScenarios(const GenerateArgs& args) {
    auto config = app::loadConfig(args.config);
    if (args.count) {
        if (*args.count <= 0) throw app::ConfigError("--count must be positive");
        config.scenarioCount = static_cast<std::size_t>(*args.count);
    }
    if (args.seed) config.seed = *args.seed;
    if (config.scenarioCount == 0) throw app::ConfigError("scenarios.count must be positive");
    const auto inst = app::loadInstance(config);
    const auto set = scenario::buildScenarios(inst.forecast, config.errors, config.scenarioCount, config.seed);
    const auto files = scenario::saveScenarioSet(set, inst.model.horizon.windowOf, config.scenarioDir,
                                                 {{"config_hash", config.configHash},
                                                  {"instance_hash", config.instanceHash}});
    std::printf("wrote %zu scenarios to %s (hash %s)\n", files.count, config.scenarioDir.string().c_str(),
                files.contentHash.c_str());
    return kOk;
}

struct SolveArgs {
    std::string config;
    std::optional<std::string> method;
    std::optional<std::string> risk;
    std::optional<double> alpha;
    std::optional<std::size_t> workers;
    std::optional<int> maxIterations;
    std::optional<double> tolerance;
    std::optional<std::string> out;
};

int solve(const SolveArgs& args) {
    auto config = app::loadConfig(args.config);
    if (args.method) config.method = app::parseMethod(*args.method);
    if (args.risk) config.risk.kind = app::parseRisk(*args.risk);
    if (args.alpha) {
        if (!(*args.alpha > 0.0 && *args.alpha < 1.0)) throw app::ConfigError("--alpha must lie in (0, 1)");
        config.risk.alpha = *args.alpha;
    }
    if (args.workers) {
        if (*args.workers == 0) throw app::ConfigError("--workers must be positive");
        config.benders.workers = *args.workers;
    }
    if (args.maxIterations) {
        if (*args.maxIterations <= 0) throw app::ConfigError("--max-iterations must be positive");
        config.benders.maxIterations = *args.maxIterations;
    }
    if (args.tolerance) {
        if (!(*args.tolerance > 0.0)) throw app::ConfigError("--tolerance must be positive");
        config.benders.tolerance = *args.tolerance;
    }
    const auto inst = app::loadInstance(config);
    const auto scenarios = loadScenarios(config);
    const auto outcome = app::solveInstance(inst.model, scenarios, config.method, config.risk, config.benders,
                                            config.extensiveMaxVariables);
    const bool cvar = config.risk.kind == stochastic::RiskKind::Cvar;
    const fs::path dir = args.out ? fs::path(*args.out)
                                  : config.outputDir / (std::string(app::methodName(config.method)) + "_" +
                                                        (cvar ? "cvar" : "neutral"));
    app::writeSolution(dir, outcome, inst.model, stampFor(config));
    std::printf("method %s risk %s objective %.10g wall %.2fs -> %s\n", app::methodName(config.method),
                cvar ? "cvar" : "neutral", outcome.objective, outcome.wallSeconds, dir.string().c_str());
    if (outcome.report) {
        std::printf("benders iterations %d gap %.3g converged %s\n", outcome.report->iterations, outcome.report->gap,
                    outcome.converged ? "yes" : "no");
    }
    if (!outcome.converged) {
        std::fprintf(stderr, "error: Benders did not reach the tolerance\n");
        return kNotConverged;
    }
    return kOk;
}

struct EvaluateArgs {
    std::string config;
    std::string solution;
    std::optional<double> alpha;
    std::optional<std::string> out;
    std::size_t bins = 20;
};

int evaluate(const EvaluateArgs& args) {
    const auto config = app::loadConfig(args.config);
    const auto solution = app::loadSolution(args.solution);
    if (solution.stamp.instanceHash != config.instanceHash)
        throw app::MismatchError("solution was computed for a different instance");
    const auto inst = app::loadInstance(config);
    const auto scenarios = loadScenarios(config);
    if (solution.stamp.scenarioHash != scenario::manifestHash(config.scenarioDir))
        throw app::MismatchError("solution was computed on a different scenario set");
    const double alpha = args.alpha.value_or(solution.risk.kind == stochastic::RiskKind::Cvar ? solution.risk.alpha
                                                                                            : config.risk.alpha);
    if (!(alpha > 0.0 && alpha < 1.0)) throw app::ConfigError("--alpha must lie in (0, 1)");
    if (args.bins == 0) throw app::ConfigError("--bins must be positive");
    const auto report = app::buildProfitReport(inst.model, scenarios, solution, alpha, args.bins);
    const fs::path dir = args.out ? fs::path(*args.out) : fs::path(args.solution);
    app::writeProfitReport(dir, report, solution.stamp);
    std::printf("expected profit %.6f std %.6f cost CVaR(%.2f) %.6f\n", report.expectedProfit, report.profitStdDev,
                alpha, report.costCvar);
    std::printf("scheduled %.3f kWh withdrawn %.3f kWh reconciliation %.3g -> %s\n", report.scheduledEnergy,
                report.withdrawnEnergy, report.reconciliationError, dir.string().c_str());
    return kOk;
}

struct SweepArgs {
    std::string config;
    std::optional<std::string> levels;
    std::optional<std::string> method;
    std::optional<std::size_t> levelWorkers;
    std::optional<std::string> out;
};

int tariffSweep(const SweepArgs& args) {
    auto config = app::loadConfig(args.config);
    if (args.levels) config.sweep.levels = app::parseLevels(*args.levels);
    if (args.method) config.sweep.method = app::parseMethod(*args.method);
    if (args.levelWorkers) {
        if (*args.levelWorkers == 0) throw app::ConfigError("--level-workers must be positive");
        config.sweep.levelWorkers = *args.levelWorkers;
    }
    // Deltas are reported against the first row, which must be the flat tariff.
    if (config.sweep.levels.front() != 0.0) config.sweep.levels.insert(config.sweep.levels.begin(), 0.0);
    const auto inst = app::loadInstance(config);
    const auto scenarios = loadScenarios(config);
    const auto rows = app::runTariffSweep(inst.model, scenarios, config.sweep, config.benders,
                                          config.extensiveMaxVariables);
    const fs::path dir = args.out ? fs::path(*args.out) : config.outputDir / "tariff_sweep";
    app::writeSweepReport(dir, rows, inst.model, config.sweep, stampFor(config));
    int failed = 0;
    for (const auto& r : rows) {
        if (r.ok) {
            std::printf("swing %.2f profit %.6f low %.4f kWh high %.4f kWh%s\n", r.swing, r.expectedProfit,
                        r.lowWithdrawal, r.highWithdrawal, r.converged ? "" : " (not converged)");
        } else {
            ++failed;
            std::printf("swing %.2f failed: %s\n", r.swing, r.error.c_str());
        }
    }
    std::printf("-> %s\n", dir.string().c_str());
    return failed ? kFailure : kOk;
}

struct SynthArgs {
    std::string out;
    app::SyntheticSpec spec;
    std::size_t scenarios = 10;
    std::uint64_t scenarioSeed = 42;
    std::string method = "benders";
};

int synthInstance(const SynthArgs& args) {
    if (args.scenarios == 0) throw app::ConfigError("--scenarios must be positive");
    const nlohmann::json overrides = {{"scenarios", {{"count", args.scenarios}, {"seed", args.scenarioSeed}}},
                                      {"solver", {{"method", args.method}}}};
    app::parseMethod(args.method);
    const auto file = app::writeSyntheticInstance(args.spec, args.out, overrides);
    std::printf("wrote %s\n", file.string().c_str());
    return kOk;
}

template <typename F>
int guarded(F&& run) {
    try {
        return run();
    } catch (const app::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const app::MismatchError& e) {
        std::fprintf(stderr, "input mismatch: %s\n", e.what());
        return kUsage;
    } catch (const app::SizeGuardError& e) {
        std::fprintf(stderr, "size guard: %s\n", e.what());
        return kUsage;
    } catch (const stochastic::InfeasibleModel& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Two-stage stochastic bidding for a virtual power plant"};
    cli.require_subcommand(1);

    GenerateArgs gen;
    auto* genCmd = cli.add_subcommand("generate-scenarios", "Sample the scenario set of a config");
    genCmd->add_option("--config", gen.config, "Config JSON")->required();
    genCmd->add_option("--count", gen.count, "Override scenarios.count");
    genCmd->add_option("--seed", gen.seed, "Override scenarios.seed");

    SolveArgs sol;
    auto* solCmd = cli.add_subcommand("solve", "Solve the stochastic bidding problem");
    solCmd->add_option("--config", sol.config, "Config JSON")->required();
    solCmd->add_option("--method", sol.method, "benders or extensive");
    solCmd->add_option("--risk", sol.risk, "neutral or cvar");
    solCmd->add_option("--alpha", sol.alpha, "CVaR confidence level");
    solCmd->add_option("--workers", sol.workers, "Benders subproblem threads");
    solCmd->add_option("--max-iterations", sol.maxIterations, "Benders iteration limit");
    solCmd->add_option("--tolerance", sol.tolerance, "Benders relative gap tolerance");
    solCmd->add_option("--out", sol.out, "Solution directory");

    EvaluateArgs ev;
    auto* evCmd = cli.add_subcommand("evaluate", "Recompute profit statistics of a stored solution");
    evCmd->add_option("--config", ev.config, "Config JSON")->required();
    evCmd->add_option("--solution", ev.solution, "Solution directory")->required();
    evCmd->add_option("--alpha", ev.alpha, "CVaR level of the report");
    evCmd->add_option("--bins", ev.bins, "Histogram bins");
    evCmd->add_option("--out", ev.out, "Report directory (default: the solution directory)");

    SweepArgs sw;
    auto* swCmd = cli.add_subcommand("tariff-sweep", "Solve once per dynamic-tariff swing level");
    swCmd->add_option("--config", sw.config, "Config JSON")->required();
    swCmd->add_option("--levels", sw.levels, "start:end:step or a comma list");
    swCmd->add_option("--method", sw.method, "benders or extensive");
    swCmd->add_option("--level-workers", sw.levelWorkers, "Swing levels solved concurrently");
    swCmd->add_option("--out", sw.out, "Report directory");

    SynthArgs syn;
    auto* synCmd = cli.add_subcommand("synth-instance", "Write a synthetic instance and its config");
    synCmd->add_option("--out", syn.out, "Instance directory")->required();
    synCmd->add_option("--buses", syn.spec.buses, "Feeder size")->check(CLI::Range(2, 97));
    synCmd->add_option("--steps", syn.spec.steps, "Time steps");
    synCmd->add_option("--step-hours", syn.spec.stepHours, "Step length in hours");
    synCmd->add_option("--start-hour", syn.spec.startHour, "Clock hour of the first step");
    synCmd->add_option("--rcm-window-hours", syn.spec.rcmWindowHours, "Reserve capacity window length");
    synCmd->add_option("--prequalified-kw", syn.spec.prequalifiedPower, "Prequalified reserve power");
    synCmd->add_option("--seed", syn.spec.seed, "Instance seed");
    synCmd->add_option("--scenarios", syn.scenarios, "scenarios.count of the config");
    synCmd->add_option("--scenario-seed", syn.scenarioSeed, "scenarios.seed of the config");
    synCmd->add_option("--method", syn.method, "solver.method of the config");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return kUsage;
    }

    if (*genCmd) return guarded([&] { return generateScenarios(gen); });
    if (*solCmd) return guarded([&] { return solve(sol); });
    if (*evCmd) return guarded([&] { return evaluate(ev); });
    if (*swCmd) return guarded([&] { return tariffSweep(sw); });
    return guarded([&] { return synthInstance(syn); });
}
