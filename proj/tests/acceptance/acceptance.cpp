// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "lp_oracle.hpp"
#include "vpp/app/config.hpp"
#include "vpp/app/reports.hpp"
#include "vpp/app/synthetic.hpp"
#include "vpp/benders/benders.hpp"
#include "vpp/grid/distflow.hpp"
#include "vpp/io/csv.hpp"
#include "vpp/lp/simplex.hpp"
#include "vpp/scenario/lhs.hpp"
#include "vpp/scenario/scenario_io.hpp"
#include "vpp/stochastic/extensive.hpp"
#include "vpp/stochastic/risk.hpp"

using namespace vpp;
namespace fs = std::filesystem;
using stochastic::RiskMeasure;

namespace {

const fs::path kData = VPP_DATA_DIR;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double relGap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Desk {
    app::RunConfig config;
    app::LoadedInstance inst;
    scenario::ScenarioSet scenarios;
};

Desk loadDesk() {
    Desk d;
    d.config = app::loadConfig(kData / "desk" / "config.json");
    d.inst = app::loadInstance(d.config);
    d.scenarios = scenario::buildScenarios(d.inst.forecast, d.config.errors, d.config.scenarioCount, d.config.seed);
    return d;
}

std::vector<double> probabilities(const scenario::ScenarioSet& set) {
    std::vector<double> p;
    for (const auto& s : set.scenarios) p.push_back(s.probability);
    return p;
}

Verdict equivalence(const Desk& desk, const RiskMeasure& risk) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    benders::BendersOptions opt = desk.config.benders;
    opt.tolerance = 1e-6;
    opt.maxIterations = 200;
    const auto bd = benders::solveBenders(desk.inst.model, desk.scenarios, risk, opt);
    const auto ef = stochastic::buildExtensive(desk.inst.model, desk.scenarios, risk);
    const auto ex = stochastic::solveExtensive(ef, desk.inst.model, desk.scenarios);
    const double wall = seconds(t0);
    const double gap = relGap(bd.objective, ex.objective);
    v.detail = fmt("benders %.8f extensive %.8f rel %.2e", bd.objective, ex.objective, gap) +
               fmt(", %.0f iterations, %.1f s", bd.report.iterations, wall);
    v.require(bd.report.converged, "Benders did not converge; " + v.detail);
    v.require(gap <= 1e-4, "objectives differ; " + v.detail);
    v.require(bd.report.iterations <= 200, "too many iterations; " + v.detail);
    v.require(wall < 60.0, "too slow; " + v.detail);
    return v;
}

Verdict riskTradeoff(const Desk& desk) {
    Verdict v;
    // Pareto(1.5) multipliers on the upward activation and mFRR prices give
    // rare, very expensive shortfalls.
    auto set = scenario::buildScenarios(desk.inst.forecast, desk.config.errors, 40, 17);
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& s : set.scenarios) {
        const double m = std::pow(1.0 - unit(rng), -1.0 / 1.5);
        for (auto& p : s.series.ramUpPrice) p *= m;
        for (auto& p : s.series.mfrrUpPrice) p *= m;
        std::tie(s.imbalanceShort, s.imbalanceLong) = scenario::imbalancePrices(s.series);
    }
    const auto probs = probabilities(set);
    const double alpha = 0.9;
    auto solveWith = [&](const RiskMeasure& risk) {
        const auto r = benders::solveBenders(desk.inst.model, set, risk, desk.config.benders);
        if (!r.report.converged) throw std::runtime_error("Benders did not converge");
        return stochastic::totals(r.breakdowns);
    };
    const auto neutral = solveWith(RiskMeasure::expectation());
    const auto averse = solveWith(RiskMeasure::cvar(alpha));
    const double cvN = stochastic::cvarOfSamples(neutral, probs, alpha);
    const double cvA = stochastic::cvarOfSamples(averse, probs, alpha);
    const double eN = stochastic::expectationOfSamples(neutral, probs);
    const double eA = stochastic::expectationOfSamples(averse, probs);
    v.detail = fmt("CVaR neutral %.4f averse %.4f", cvN, cvA) + fmt(", E neutral %.4f averse %.4f", eN, eA);
    v.require(cvA <= cvN + 1e-6, "CVaR strategy has the larger tail; " + v.detail);
    v.require(eA >= eN - 1e-6, "CVaR strategy has the smaller expectation; " + v.detail);
    return v;
}

/// Sort descending, take (1 - alpha) of the mass from the top, average.
double bruteForceTail(std::vector<double> costs, std::vector<double> probs, double alpha) {
    std::vector<std::size_t> idx(costs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });
    const double tail = 1.0 - alpha;
    double mass = 0.0, acc = 0.0;
    for (std::size_t k : idx) {
        const double take = std::min(probs[k], tail - mass);
        if (take <= 0.0) break;
        acc += take * costs[k];
        mass += take;
    }
    return acc / tail;
}

Verdict cvarEvaluator() {
    Verdict v;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 30);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size(rng);
        std::vector<double> costs(static_cast<std::size_t>(n)), probs(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            // Integer-valued costs make ties common.
            costs[static_cast<std::size_t>(k)] = trial % 3 == 0 ? std::round(10.0 * unit(rng)) : 200.0 * unit(rng) - 100.0;
            probs[static_cast<std::size_t>(k)] = trial % 2 == 0 ? 1.0 : 0.05 + unit(rng);
        }
        const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
        for (auto& p : probs) p /= total;
        // Equal weights with alpha off the 1/n grid force a split atom.
        double alpha = 0.01 + 0.98 * unit(rng);
        if (trial % 4 == 1) alpha = 1.0 - (std::floor(0.5 * n) + 0.5) / n;
        const double got = stochastic::cvarOfSamples(costs, probs, alpha);
        const double want = bruteForceTail(costs, probs, alpha);
        const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
        worst = std::max(worst, err);
        if (err > 1e-12) {
            v.require(false, fmt("trial %.0f differs by %.3e", trial, err));
            break;
        }
    }
    if (v.pass) v.detail = fmt("1000 distributions, max rel error %.2e", worst);
    return v;
}

/// c'x recomputed through the duals alone: y'b plus the bound terms of the
/// reduced costs, with sign feasibility checked on the way.
bool dualCertificate(const lp::LinearProgram& p, const lp::LpSolution& sol, double& dualObj) {
    const auto& vars = p.variables();
    std::vector<double> d(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) d[j] = p.objective()[j];
    dualObj = p.objectiveConstant();
    const auto& rows = p.constraints();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = sol.duals[i];
        if (rows[i].sense == lp::Sense::GreaterEqual && y < -1e-9) return false;
        if (rows[i].sense == lp::Sense::LessEqual && y > 1e-9) return false;
        dualObj += y * rows[i].rhs;
        for (const auto& t : rows[i].terms) d[static_cast<std::size_t>(t.var)] -= y * t.coef;
    }
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (d[j] > 0.0) {
            if (!std::isfinite(vars[j].lower)) return d[j] < 1e-9;
            dualObj += d[j] * vars[j].lower;
        } else if (d[j] < 0.0) {
            if (!std::isfinite(vars[j].upper)) return d[j] > -1e-9;
            dualObj += d[j] * vars[j].upper;
        }
    }
    return true;
}

Verdict lpSolver() {
    Verdict v;
    std::mt19937_64 rng(500);
    const lp::SimplexSolver solver;
    double worstPrimal = 0.0, worstDual = 0.0;
    for (int trial = 0; trial < 500 && v.pass; ++trial) {
        const auto p = testing::randomFeasibleLp(rng, 6, 8);
        const auto sol = solver.solve(p);
        const auto oracle = testing::vertexEnumerationOptimum(p);
        if (!oracle || sol.status != lp::SolveStatus::Optimal) {
            v.require(false, fmt("trial %.0f not solved", trial));
            break;
        }
        const double err = std::abs(sol.objective - *oracle);
        double dualObj = 0.0;
        const bool feasible = dualCertificate(p, sol, dualObj);
        const double dgap = std::abs(dualObj - sol.objective);
        worstPrimal = std::max(worstPrimal, err);
        worstDual = std::max(worstDual, dgap);
        v.require(err <= 1e-7 * std::max(1.0, std::abs(*oracle)), fmt("trial %.0f off the vertex optimum by %.3e", trial, err));
        v.require(feasible, fmt("trial %.0f dual signs infeasible", trial));
        v.require(dgap <= 1e-7 * std::max(1.0, std::abs(sol.objective)), fmt("trial %.0f duality gap %.3e", trial, dgap));
    }
    if (v.pass) v.detail = fmt("500 LPs, max |primal - oracle| %.2e, max duality gap %.2e", worstPrimal, worstDual);
    return v;
}

Verdict lhsStrata() {
    Verdict v;
    for (std::size_t n : {4u, 100u, 1000u}) {
        const auto m = scenario::lhsSample(n, 10, 42);
        for (std::size_t c = 0; c < 10; ++c) {
            std::vector<int> hits(n, 0);
            for (std::size_t r = 0; r < n; ++r) {
                const double u = m.at(r, c);
                const auto k = static_cast<std::size_t>(std::floor(u * static_cast<double>(n)));
                if (u < 0.0 || u >= 1.0 || k >= n) {
                    v.require(false, fmt("n=%.0f column %.0f sample outside [0, 1)", n, c));
                    return v;
                }
                ++hits[k];
            }
            for (int h : hits) v.require(h == 1, fmt("n=%.0f column %.0f stratum count %.0f", n, c, h));
        }
    }
    if (v.pass) v.detail = "n = 4, 100, 1000 with 10 dimensions";
    return v;
}

Verdict distflowConservation() {
    Verdict v;
    double worst = 0.0, worstFlow = 0.0;
    std::size_t solved = 0;
    for (std::size_t buses : {2u, 5u, 13u, 31u, 60u, 97u}) {
        app::SyntheticSpec spec;
        spec.buses = buses;
        spec.steps = 4;
        spec.startHour = 10.0;
        spec.rcmWindowHours = 2.0;
        spec.seed = 1000 + buses;
        const auto inst = app::syntheticInstance(spec);
        const auto set = scenario::buildScenarios(inst.forecast, scenario::defaultErrorTable(), 3, buses);
        const auto ef = stochastic::buildExtensive(inst.model, set, RiskMeasure::expectation());
        const auto sol = stochastic::solveExtensive(ef, inst.model, set);
        const auto& x = sol.lp.primal;
        const double base = inst.model.network.baseKva();
        for (const auto& block : ef.blocks) {
            ++solved;
            for (std::size_t t = 0; t < spec.steps; ++t) {
                double sum = x[static_cast<std::size_t>(block.grid.pcc[t])];
                for (const auto& node : block.grid.injection) sum += x[static_cast<std::size_t>(node[t])];
                worst = std::max(worst, std::abs(sum));
                for (std::size_t b = 0; b < inst.model.network.branches.size(); ++b) {
                    const double p = x[static_cast<std::size_t>(block.grid.pFlow[b][t])] * base;
                    const double q = x[static_cast<std::size_t>(block.grid.qFlow[b][t])] * base;
                    const double s = inst.model.network.branches[b].sMax;
                    worstFlow = std::max(worstFlow, std::hypot(p, q) - s);
                }
            }
        }
    }
    v.require(worst <= 1e-9, fmt("conservation residual %.3e", worst));
    v.require(worstFlow <= 1e-7, fmt("solved flow outside the disc by %.3e kVA", worstFlow));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> box(-1.05, 1.05);
    std::size_t admitted = 0;
    for (int segments : {8, 16}) {
        const double sMax = 250.0;
        const auto poly = grid::flowPolygon(sMax, segments);
        for (int k = 0; k < 10000; ++k) {
            const double p = sMax * box(rng), q = sMax * box(rng);
            if (!poly.admits(p, q)) continue;
            ++admitted;
            v.require(p * p + q * q <= sMax * sMax * (1.0 + 1e-12), fmt("admitted point outside the disc at K=%.0f", segments));
        }
    }
    if (v.pass)
        v.detail = fmt("%.0f solved scenarios up to 97 buses, max residual %.2e; %.0f admitted polygon points inside",
                       solved, worst, admitted);
    return v;
}

Verdict financialIdentities(const Desk& desk) {
    Verdict v;
    const auto& m = desk.inst.model;
    const auto ef = stochastic::buildExtensive(m, desk.scenarios, RiskMeasure::expectation());
    const auto sol = stochastic::solveExtensive(ef, m, desk.scenarios);
    const auto& x = sol.lp.primal;
    const auto at = [&x](int j) { return x[static_cast<std::size_t>(j)]; };
    const double pbar = m.market.prequalifiedPower;
    double balance = 0.0, pccLink = 0.0, caps = 0.0, floors = 0.0;
    for (const auto& b : ef.blocks) {
        const auto& k = b.market;
        for (std::size_t t = 0; t < m.horizon.stepCount; ++t) {
            const auto w = static_cast<std::size_t>(m.horizon.windowOf[t]);
            const double rhs = at(ef.first.dam[t]) + at(k.ramUp[t]) - at(k.ramDn[t]) - at(k.imbShort[t]) + at(k.imbLong[t]);
            balance = std::max(balance, std::abs(at(k.vpp[t]) - rhs));
            pccLink = std::max(pccLink, std::abs(at(k.vpp[t]) + at(b.grid.pcc[t])));
            caps = std::max({caps, at(k.ramUp[t]) - pbar, at(k.ramDn[t]) - pbar});
            floors = std::max({floors, at(ef.first.rcmUp[w]) - at(k.ramUp[t]), at(ef.first.rcmDn[w]) - at(k.ramDn[t])});
        }
    }
    v.require(balance <= 1e-7, fmt("position balance residual %.3e", balance));
    v.require(pccLink <= 1e-7, fmt("delivery and PCC exchange differ by %.3e", pccLink));
    v.require(caps <= 1e-7, fmt("activation above prequalified power by %.3e", caps));
    v.require(floors <= 1e-7, fmt("activation below the capacity bid by %.3e", floors));

    // Streams rebuilt from primal values only, against the LP objective.
    double expected = 0.0;
    for (std::size_t s = 0; s < desk.scenarios.size(); ++s) {
        const auto series = benders::extractSeries(ef.blocks[s], x);
        const auto b = app::recomputeBreakdown(m, desk.scenarios.scenarios[s], sol.firstStage, series);
        const double parts = b.operations + b.tariff + b.imbalance - b.revenueDam - b.revenueRcm - b.revenueRam;
        v.require(std::abs(parts - b.total) <= 1e-9 * std::max(1.0, std::abs(b.total)), "breakdown parts do not sum");
        expected += desk.scenarios.scenarios[s].probability * b.total;
    }
    const double rel = relGap(expected, sol.objective);
    v.require(rel <= 1e-6, fmt("breakdown %.8f vs objective %.8f", expected, sol.objective));
    if (v.pass)
        v.detail = fmt("balance %.1e, caps/floors ok, breakdown vs objective rel %.1e", balance, rel);
    return v;
}

Verdict tariffTrend() {
    Verdict v;
    const auto config = app::loadConfig(kData / "sweep" / "config.json");
    const auto inst = app::loadInstance(config);
    const auto set = scenario::buildScenarios(inst.forecast, config.errors, config.scenarioCount, config.seed);
    auto sweep = config.sweep;
    sweep.levels = app::parseLevels("0:1:0.1");
    const auto rows = app::runTariffSweep(inst.model, set, sweep, config.benders, config.extensiveMaxVariables);
    for (const auto& r : rows) v.require(r.ok && r.converged, fmt("swing %.1f failed", r.swing) + ": " + r.error);
    if (!v.pass) return v;
    const double slack = 1e-5;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        v.require(rows[k].lowWithdrawal >= rows[k - 1].lowWithdrawal - slack,
                  fmt("low-window withdrawal falls at swing %.1f", rows[k].swing));
        v.require(rows[k].highWithdrawal <= rows[k - 1].highWithdrawal + slack,
                  fmt("high-window withdrawal rises at swing %.1f", rows[k].swing));
        v.require(rows[k].expectedProfit <= rows[k - 1].expectedProfit + slack,
                  fmt("expected profit rises at swing %.1f", rows[k].swing));
    }
    const fs::path dir = fs::temp_directory_path() / ("vpp_acceptance_sweep_" + std::to_string(::getpid()));
    app::writeSweepReport(dir, rows, inst.model, sweep, {config.configHash, config.instanceHash, ""});
    const auto table = io::CsvTable::read(dir / "tariff_sweep.csv");
    fs::remove_all(dir);
    for (const char* col : {"profit_change_pct", "low_change_pct", "high_change_pct"})
        v.require(table.number(0, col) == 0.0, std::string("swing-0 row has nonzero ") + col);
    const auto& last = rows.back();
    if (v.pass)
        v.detail = fmt("profit %+.1f %%, low %+.1f %%", app::percentChange(last.expectedProfit, rows[0].expectedProfit),
                       app::percentChange(last.lowWithdrawal, rows[0].lowWithdrawal)) +
                   fmt(", high %+.1f %% at swing 1", app::percentChange(last.highWithdrawal, rows[0].highWithdrawal));
    return v;
}

Verdict determinism(const Desk& desk) {
    Verdict v;
    const fs::path root = fs::temp_directory_path() / ("vpp_acceptance_det_" + std::to_string(::getpid()));
    fs::remove_all(root);
    for (const char* run : {"a", "b"}) {
        const auto set = scenario::buildScenarios(desk.inst.forecast, desk.config.errors, desk.config.scenarioCount,
                                                  desk.config.seed);
        scenario::saveScenarioSet(set, desk.inst.model.horizon.windowOf, root / run,
                                  {{"config_hash", desk.config.configHash}});
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const auto name = entry.path().filename();
        v.require(io::readTextFile(entry.path()) == io::readTextFile(root / "b" / name), "file differs: " + name.string());
        ++files;
    }
    fs::remove_all(root);

    std::vector<double> reference;
    double worst = 0.0;
    for (std::size_t workers : {1u, 2u, 4u}) {
        auto opt = desk.config.benders;
        opt.workers = workers;
        const auto r = benders::solveBenders(desk.inst.model, desk.scenarios, RiskMeasure::expectation(), opt);
        const auto x = r.firstStage.flatten();
        if (reference.empty()) reference = x;
        for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(x[j] - reference[j]));
    }
    v.require(worst <= 1e-9, fmt("bids differ by %.3e across worker counts", worst));
    if (v.pass) v.detail = fmt("%.0f identical files, bids max diff %.1e over 1, 2, 4 workers", files, worst);
    return v;
}

}  // namespace

/// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"Benders-extensive equivalence, expectation", [] { return equivalence(loadDesk(), RiskMeasure::expectation()); }},
        {"Benders-extensive equivalence, CVaR 0.9", [] { return equivalence(loadDesk(), RiskMeasure::cvar(0.9)); }},
        {"risk trade-off direction", [] { return riskTradeoff(loadDesk()); }},
        {"CVaR evaluator vs sorted tail", cvarEvaluator},
        {"LP solver vs vertex enumeration", lpSolver},
        {"LHS stratification", lhsStrata},
        {"DistFlow conservation and flow polygon", distflowConservation},
        {"financial identities", [] { return financialIdentities(loadDesk()); }},
        {"tariff sweep trend", tariffTrend},
        {"determinism", [] { return determinism(loadDesk()); }},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        if (!only.empty() && std::find(only.begin(), only.end(), index) == only.end()) continue;
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            v = run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2d %s  %s (%s) [%.1f s]\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str(),
                    seconds(t0));
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
