#include "vpp/app/reports.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "vpp/io/csv.hpp"
#include "vpp/market/market.hpp"
#include "vpp/stochastic/extensive.hpp"
#include "vpp/stochastic/risk.hpp"

namespace vpp::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string seriesFileName(std::size_t s) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "scenario_%04zu.csv", s);
    return buf;
}

std::vector<double> probabilitiesOf(const scenario::ScenarioSet& set) {
    std::vector<double> p;
    p.reserve(set.size());
    for (const auto& s : set.scenarios) p.push_back(s.probability);
    return p;
}

json riskJson(const stochastic::RiskMeasure& r) {
    return {{"measure", r.kind == stochastic::RiskKind::Cvar ? "cvar" : "neutral"}, {"alpha", r.alpha}};
}

json stampJson(const SolutionStamp& s) {
    return {{"config_hash", s.configHash}, {"instance_hash", s.instanceHash}, {"scenario_hash", s.scenarioHash}};
}

json breakdownJson(const market::CostBreakdown& b) {
    return {{"revenue_dam", b.revenueDam}, {"revenue_rcm", b.revenueRcm}, {"revenue_ram", b.revenueRam},
            {"cost_operations", b.operations}, {"cost_tariff", b.tariff}, {"cost_imbalance", b.imbalance},
            {"total_cost", b.total}};
}

const std::vector<std::string> kBreakdownColumns{"revenue_dam", "revenue_rcm", "revenue_ram", "cost_operations",
                                                 "cost_tariff", "cost_imbalance", "total_cost"};

void writeBreakdownRow(io::CsvWriter& w, const market::CostBreakdown& b) {
    w.cell(b.revenueDam).cell(b.revenueRcm).cell(b.revenueRam).cell(b.operations).cell(b.tariff).cell(b.imbalance)
        .cell(b.total);
}

std::string renderSeries(const benders::ScenarioSeries& s, const std::vector<double>& dam) {
    std::ostringstream out;
    io::CsvWriter w(out);
    std::vector<std::string> head{"step", "dam_kw", "ram_up_kw", "ram_dn_kw", "imb_short_kw", "imb_long_kw",
                                  "vpp_kw", "pcc_kw", "withdrawal_kw", "storage_charge_kw", "storage_discharge_kw"};
    const auto indexed = [&head](const char* prefix, std::size_t n, const char* suffix) {
        for (std::size_t k = 0; k < n; ++k) head.push_back(prefix + std::to_string(k) + suffix);
    };
    indexed("dg_", s.generatorPower.size(), "_kw");
    indexed("ev_dis_", s.evDischarge.size(), "_kw");
    indexed("bess_ch_", s.bessCharge.size(), "_kw");
    indexed("bess_dis_", s.bessDischarge.size(), "_kw");
    w.header(head);
    for (std::size_t t = 0; t < s.pcc.size(); ++t) {
        w.cell(static_cast<long long>(t)).cell(dam[t]).cell(s.ramUp[t]).cell(s.ramDn[t]).cell(s.imbShort[t])
            .cell(s.imbLong[t]).cell(s.vpp[t]).cell(s.pcc[t]).cell(s.withdrawal[t]).cell(s.storageCharge[t])
            .cell(s.storageDischarge[t]);
        for (const auto* group : {&s.generatorPower, &s.evDischarge, &s.bessCharge, &s.bessDischarge})
            for (const auto& v : *group) w.cell(v[t]);
        w.endRow();
    }
    return out.str();
}

std::vector<std::vector<double>> prefixed(const io::CsvTable& t, const std::string& prefix) {
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; t.hasColumn(prefix + std::to_string(k) + "_kw"); ++k)
        out.push_back(t.numbers(prefix + std::to_string(k) + "_kw"));
    return out;
}

benders::ScenarioSeries parseSeries(const io::CsvTable& t) {
    benders::ScenarioSeries s;
    s.ramUp = t.numbers("ram_up_kw");
    s.ramDn = t.numbers("ram_dn_kw");
    s.imbShort = t.numbers("imb_short_kw");
    s.imbLong = t.numbers("imb_long_kw");
    s.vpp = t.numbers("vpp_kw");
    s.pcc = t.numbers("pcc_kw");
    s.withdrawal = t.numbers("withdrawal_kw");
    s.storageCharge = t.numbers("storage_charge_kw");
    s.storageDischarge = t.numbers("storage_discharge_kw");
    s.generatorPower = prefixed(t, "dg_");
    s.evDischarge = prefixed(t, "ev_dis_");
    s.bessCharge = prefixed(t, "bess_ch_");
    s.bessDischarge = prefixed(t, "bess_dis_");
    return s;
}

double sum(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

}  // namespace

std::size_t extensiveSize(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                          const stochastic::RiskMeasure& risk) {
    if (scenarios.size() == 0) return 0;
    scenario::ScenarioSet one;
    one.scenarios = {scenarios.scenarios.front()};
    one.scenarios[0].probability = 1.0;
    const auto ef = stochastic::buildExtensive(model, one, stochastic::RiskMeasure::expectation());
    const std::size_t first = ef.first.all().size();
    const std::size_t block = ef.program.variableCount() - first;
    // CVaR adds the threshold and one excess variable per scenario.
    const std::size_t cvar = risk.kind == stochastic::RiskKind::Cvar ? 1 + scenarios.size() : 0;
    return first + block * scenarios.size() + cvar;
}

SolveOutcome solveInstance(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                           SolveMethod method, const stochastic::RiskMeasure& risk,
                           const benders::BendersOptions& options, std::size_t extensiveMaxVariables) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveOutcome out;
    out.method = method;
    out.risk = risk;
    if (method == SolveMethod::Extensive) {
        const std::size_t size = extensiveSize(model, scenarios, risk);
        if (size > extensiveMaxVariables) {
            throw SizeGuardError("extensive form would have " + std::to_string(size) + " variables, above the limit of " +
                                 std::to_string(extensiveMaxVariables) + "; use the benders method");
        }
        const auto ef = stochastic::buildExtensive(model, scenarios, risk);
        auto sol = stochastic::solveExtensive(ef, model, scenarios, options.lp);
        out.objective = sol.objective;
        out.firstStage = std::move(sol.firstStage);
        out.breakdowns = std::move(sol.breakdowns);
        for (const auto& block : ef.blocks) out.series.push_back(benders::extractSeries(block, sol.lp.primal));
    } else {
        auto r = benders::solveBenders(model, scenarios, risk, options);
        out.objective = r.objective;
        out.converged = r.report.converged;
        out.firstStage = std::move(r.firstStage);
        out.breakdowns = std::move(r.breakdowns);
        out.series = std::move(r.series);
        out.report = std::move(r.report);
    }
    out.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void writeSolution(const fs::path& dir, const SolveOutcome& outcome, const stochastic::VppModel& model,
                   const SolutionStamp& stamp) {
    fs::create_directories(dir / "series");
    const auto& h = model.horizon;
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        w.header({"step", "clock_hour", "window", "dam_kw", "rcm_up_kw", "rcm_dn_kw"});
        for (std::size_t t = 0; t < h.stepCount; ++t) {
            const auto win = static_cast<std::size_t>(h.windowOf[t]);
            w.cell(static_cast<long long>(t)).cell(h.clockHour(t)).cell(static_cast<long long>(win))
                .cell(outcome.firstStage.dam[t]).cell(outcome.firstStage.rcmUp[win]).cell(outcome.firstStage.rcmDn[win]);
            w.endRow();
        }
        io::writeTextFile(dir / "first_stage.csv", out.str());
    }
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        std::vector<std::string> head{"scenario"};
        head.insert(head.end(), kBreakdownColumns.begin(), kBreakdownColumns.end());
        w.header(head);
        for (std::size_t s = 0; s < outcome.breakdowns.size(); ++s) {
            w.cell(static_cast<long long>(s));
            writeBreakdownRow(w, outcome.breakdowns[s]);
            w.endRow();
        }
        io::writeTextFile(dir / "breakdowns.csv", out.str());
    }
    for (std::size_t s = 0; s < outcome.series.size(); ++s)
        io::writeTextFile(dir / "series" / seriesFileName(s), renderSeries(outcome.series[s], outcome.firstStage.dam));

    json doc = {{"format", "vpp-solution/1"},
                {"method", methodName(outcome.method)},
                {"risk", riskJson(outcome.risk)},
                {"objective", outcome.objective},
                {"converged", outcome.converged},
                {"scenarios", outcome.series.size()},
                {"wall_seconds", outcome.wallSeconds},
                {"stamp", stampJson(stamp)}};
    if (outcome.report) {
        const auto& r = *outcome.report;
        doc["benders"] = {{"iterations", r.iterations}, {"lower_bound", r.lowerBound}, {"upper_bound", r.upperBound},
                          {"gap", r.gap}};
        io::writeTextFile(dir / "trace.csv", benders::renderTrace(r));
    }
    io::writeTextFile(dir / "solution.json", doc.dump(2) + "\n");
}

PersistedSolution loadSolution(const fs::path& dir) {
    if (!fs::exists(dir / "solution.json")) throw io::IoError("no solution.json in " + dir.string());
    const json doc = json::parse(io::readTextFile(dir / "solution.json"));
    if (doc.value("format", "") != "vpp-solution/1") throw io::IoError("unknown solution format in " + dir.string());
    PersistedSolution p;
    p.method = parseMethod(doc.at("method").get<std::string>());
    p.risk.kind = parseRisk(doc.at("risk").at("measure").get<std::string>());
    p.risk.alpha = doc.at("risk").at("alpha").get<double>();
    p.objective = doc.at("objective").get<double>();
    const auto& st = doc.at("stamp");
    p.stamp = {st.at("config_hash").get<std::string>(), st.at("instance_hash").get<std::string>(),
               st.at("scenario_hash").get<std::string>()};

    const auto fs1 = io::CsvTable::read(dir / "first_stage.csv");
    p.firstStage.dam = fs1.numbers("dam_kw");
    int windows = 0;
    for (std::size_t r = 0; r < fs1.rowCount(); ++r) windows = std::max(windows, fs1.integer(r, "window") + 1);
    p.firstStage.rcmUp.assign(static_cast<std::size_t>(windows), 0.0);
    p.firstStage.rcmDn.assign(static_cast<std::size_t>(windows), 0.0);
    for (std::size_t r = 0; r < fs1.rowCount(); ++r) {
        const auto w = static_cast<std::size_t>(fs1.integer(r, "window"));
        p.firstStage.rcmUp[w] = fs1.number(r, "rcm_up_kw");
        p.firstStage.rcmDn[w] = fs1.number(r, "rcm_dn_kw");
    }

    const auto bd = io::CsvTable::read(dir / "breakdowns.csv");
    for (std::size_t r = 0; r < bd.rowCount(); ++r) {
        market::CostBreakdown b;
        b.revenueDam = bd.number(r, "revenue_dam");
        b.revenueRcm = bd.number(r, "revenue_rcm");
        b.revenueRam = bd.number(r, "revenue_ram");
        b.operations = bd.number(r, "cost_operations");
        b.tariff = bd.number(r, "cost_tariff");
        b.imbalance = bd.number(r, "cost_imbalance");
        b.total = bd.number(r, "total_cost");
        p.solverBreakdowns.push_back(b);
    }
    const auto count = doc.at("scenarios").get<std::size_t>();
    for (std::size_t s = 0; s < count; ++s)
        p.series.push_back(parseSeries(io::CsvTable::read(dir / "series" / seriesFileName(s))));
    return p;
}

market::CostBreakdown recomputeBreakdown(const stochastic::VppModel& model, const scenario::Scenario& sc,
                                         const stochastic::FirstStageDecision& first,
                                         const benders::ScenarioSeries& s) {
    const auto& f = sc.series;
    const auto& park = model.park;
    const double dt = model.horizon.stepHours;
    const std::size_t T = model.horizon.stepCount;
    if (s.pcc.size() != T || first.dam.size() != T) throw MismatchError("solution series do not match the horizon");
    if (s.generatorPower.size() != park.generators.size() || s.evDischarge.size() != park.evEvents.size() ||
        s.bessCharge.size() != park.batteries.size()) {
        throw MismatchError("solution series do not match the DER park");
    }
    double rDam = 0.0, rRam = 0.0, tariff = 0.0, imbalance = 0.0, ops = 0.0, rRcm = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        rDam += f.dayAheadPrice[t] * first.dam[t] * dt / 1000.0;
        rRam += (f.ramUpPrice[t] * s.ramUp[t] + f.ramDnPrice[t] * s.ramDn[t]) * dt / 1000.0;
        tariff += model.market.tariffSchedule[t] * s.withdrawal[t] * dt / 1000.0;
        imbalance += (sc.imbalanceShort[t] * s.imbShort[t] - sc.imbalanceLong[t] * s.imbLong[t]) * dt / 1000.0;
    }
    for (std::size_t w = 0; w < first.rcmUp.size(); ++w)
        rRcm += (f.rcmUpPrice[w] * first.rcmUp[w] + f.rcmDnPrice[w] * first.rcmDn[w]) / 1000.0;
    for (std::size_t g = 0; g < park.generators.size(); ++g)
        ops += park.generators[g].marginalCost * sum(s.generatorPower[g]) * dt;
    for (std::size_t e = 0; e < park.evEvents.size(); ++e)
        ops += park.evEvents[e].dischargeCompensation * sum(s.evDischarge[e]) * dt;
    for (std::size_t b = 0; b < park.batteries.size(); ++b)
        ops += park.batteries[b].cycleCost * (sum(s.bessCharge[b]) + sum(s.bessDischarge[b])) * dt;
    return market::CostBreakdown::fromComponents(rDam, rRcm, rRam, ops, tariff, imbalance);
}

ProfitReport buildProfitReport(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                               const PersistedSolution& solution, double alpha, std::size_t bins) {
    if (solution.series.size() != scenarios.size()) throw MismatchError("solution and scenario set differ in size");
    ProfitReport r;
    r.alpha = alpha;
    const auto probs = probabilitiesOf(scenarios);
    std::vector<double> costs;
    auto& e = r.expectedStreams;
    const double dt = model.horizon.stepHours;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const auto b = recomputeBreakdown(model, scenarios.scenarios[s], solution.firstStage, solution.series[s]);
        if (s < solution.solverBreakdowns.size())
            r.reconciliationError = std::max(r.reconciliationError, std::abs(b.total - solution.solverBreakdowns[s].total));
        const double p = probs[s];
        e.revenueDam += p * b.revenueDam;
        e.revenueRcm += p * b.revenueRcm;
        e.revenueRam += p * b.revenueRam;
        e.operations += p * b.operations;
        e.tariff += p * b.tariff;
        e.imbalance += p * b.imbalance;
        e.total += p * b.total;
        for (double pcc : solution.series[s].pcc) r.withdrawnEnergy += p * std::max(0.0, pcc) * dt;
        costs.push_back(b.total);
        r.scenarioProfit.push_back(-b.total);
        r.breakdowns.push_back(b);
    }
    for (double d : solution.firstStage.dam) r.scheduledEnergy += std::max(0.0, -d) * dt;
    r.expectedProfit = -e.total;
    double var = 0.0;
    for (std::size_t s = 0; s < costs.size(); ++s) var += probs[s] * std::pow(r.scenarioProfit[s] - r.expectedProfit, 2);
    r.profitStdDev = std::sqrt(var);
    r.costCvar = stochastic::cvarOfSamples(costs, probs, alpha);

    const auto [lo, hi] = std::minmax_element(r.scenarioProfit.begin(), r.scenarioProfit.end());
    const std::size_t nb = *hi > *lo ? std::max<std::size_t>(bins, 1) : 1;
    const double width = nb == 1 ? 0.0 : (*hi - *lo) / static_cast<double>(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        const double a = *lo + width * static_cast<double>(k);
        r.histogram.push_back({a, k + 1 == nb ? *hi : a + width, 0, 0.0});
    }
    for (std::size_t s = 0; s < r.scenarioProfit.size(); ++s) {
        std::size_t k = width > 0.0 ? static_cast<std::size_t>((r.scenarioProfit[s] - *lo) / width) : 0;
        k = std::min(k, nb - 1);
        r.histogram[k].count += 1;
        r.histogram[k].probability += probs[s];
    }
    return r;
}

void writeProfitReport(const fs::path& dir, const ProfitReport& r, const SolutionStamp& stamp) {
    fs::create_directories(dir);
    const json doc = {{"format", "vpp-profit-report/1"},
                      {"expected_profit", r.expectedProfit},
                      {"profit_std_dev", r.profitStdDev},
                      {"cost_cvar", r.costCvar},
                      {"alpha", r.alpha},
                      {"expected_streams", breakdownJson(r.expectedStreams)},
                      {"scheduled_energy_kwh", r.scheduledEnergy},
                      {"withdrawn_energy_kwh", r.withdrawnEnergy},
                      {"reconciliation_error", r.reconciliationError},
                      {"stamp", stampJson(stamp)}};
    io::writeTextFile(dir / "profit_report.json", doc.dump(2) + "\n");

    std::ostringstream hist;
    io::CsvWriter hw(hist);
    hw.header({"bin", "profit_lower", "profit_upper", "count", "probability"});
    for (std::size_t k = 0; k < r.histogram.size(); ++k) {
        const auto& b = r.histogram[k];
        hw.cell(static_cast<long long>(k)).cell(b.lower).cell(b.upper).cell(static_cast<long long>(b.count))
            .cell(b.probability);
        hw.endRow();
    }
    io::writeTextFile(dir / "profit_histogram.csv", hist.str());

    // Revenues positive, costs negative.
    std::ostringstream streams;
    io::CsvWriter sw(streams);
    sw.header({"stream", "expected_value"});
    const auto& e = r.expectedStreams;
    const std::pair<const char*, double> rows[] = {{"revenue_dam", e.revenueDam},  {"revenue_rcm", e.revenueRcm},
                                                   {"revenue_ram", e.revenueRam},  {"cost_operations", -e.operations},
                                                   {"cost_tariff", -e.tariff},     {"cost_imbalance", -e.imbalance},
                                                   {"profit", r.expectedProfit}};
    for (const auto& [name, v] : rows) {
        sw.cell(name).cell(v);
        sw.endRow();
    }
    io::writeTextFile(dir / "streams.csv", streams.str());

    std::ostringstream per;
    io::CsvWriter pw(per);
    std::vector<std::string> head{"scenario"};
    head.insert(head.end(), kBreakdownColumns.begin(), kBreakdownColumns.end());
    head.push_back("profit");
    pw.header(head);
    for (std::size_t s = 0; s < r.breakdowns.size(); ++s) {
        pw.cell(static_cast<long long>(s));
        writeBreakdownRow(pw, r.breakdowns[s]);
        pw.cell(r.scenarioProfit[s]);
        pw.endRow();
    }
    io::writeTextFile(dir / "scenario_profit.csv", per.str());
}

SweepRow summarizeSweepLevel(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                             const SolveOutcome& outcome, const SweepSettings& sweep, double swing) {
    SweepRow row;
    row.swing = swing;
    row.ok = true;
    row.converged = outcome.converged;
    const auto& h = model.horizon;
    row.expectedProfit = -outcome.objective;
    row.withdrawalProfile.assign(h.stepCount, 0.0);
    row.pccProfile.assign(h.stepCount, 0.0);
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const double p = scenarios.scenarios[s].probability;
        for (std::size_t t = 0; t < h.stepCount; ++t) {
            row.withdrawalProfile[t] += p * outcome.series[s].withdrawal[t];
            row.pccProfile[t] += p * outcome.series[s].pcc[t];
        }
    }
    const auto inWindow = [](double hour, double a, double b) { return hour >= a - 1e-9 && hour < b - 1e-9; };
    for (std::size_t t = 0; t < h.stepCount; ++t) {
        const double hour = h.clockHour(t);
        if (inWindow(hour, sweep.lowStart, sweep.lowEnd)) {
            row.lowWithdrawal += row.withdrawalProfile[t] * h.stepHours;
            row.lowPccImport += row.pccProfile[t] * h.stepHours;
        }
        if (inWindow(hour, sweep.highStart, sweep.highEnd)) {
            row.highWithdrawal += row.withdrawalProfile[t] * h.stepHours;
            row.highPccImport += row.pccProfile[t] * h.stepHours;
        }
    }
    return row;
}

std::vector<SweepRow> runTariffSweep(const stochastic::VppModel& model, const scenario::ScenarioSet& scenarios,
                                     const SweepSettings& sweep, const benders::BendersOptions& options,
                                     std::size_t extensiveMaxVariables) {
    std::vector<SweepRow> rows(sweep.levels.size());
    const auto solveLevel = [&](std::size_t k) {
        const double swing = sweep.levels[k];
        auto level = model;
        level.market.tariffSchedule = market::swingTariff(model.market.tariffSchedule, model.horizon, swing,
                                                          sweep.lowStart, sweep.lowEnd, sweep.highStart, sweep.highEnd);
        try {
            const auto outcome = solveInstance(level, scenarios, sweep.method, stochastic::RiskMeasure::expectation(),
                                               options, extensiveMaxVariables);
            rows[k] = summarizeSweepLevel(level, scenarios, outcome, sweep, swing);
        } catch (const std::exception& e) {
            rows[k] = SweepRow{};
            rows[k].swing = swing;
            rows[k].error = e.what();
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(sweep.levelWorkers, 1), rows.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < rows.size(); ++k) solveLevel(k);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < rows.size(); k = next++) solveLevel(k);
        });
    }
    for (auto& t : pool) t.join();
    return rows;
}

double percentChange(double value, double base) {
    if (value == base) return 0.0;
    if (base == 0.0) return value > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return 100.0 * (value - base) / std::abs(base);
}

void writeSweepReport(const fs::path& dir, const std::vector<SweepRow>& rows, const stochastic::VppModel& model,
                      const SweepSettings& sweep, const SolutionStamp& stamp) {
    fs::create_directories(dir);
    const SweepRow* base = rows.empty() || !rows.front().ok ? nullptr : &rows.front();
    std::ostringstream out;
    io::CsvWriter w(out);
    w.header({"swing", "status", "expected_profit", "profit_change_pct", "low_withdrawal_kwh", "low_change_pct",
              "high_withdrawal_kwh", "high_change_pct", "low_pcc_import_kwh", "high_pcc_import_kwh", "converged"});
    json levels = json::array();
    for (const auto& r : rows) {
        w.cell(r.swing).cell(r.ok ? "ok" : "failed");
        if (r.ok && base) {
            w.cell(r.expectedProfit).cell(percentChange(r.expectedProfit, base->expectedProfit));
            w.cell(r.lowWithdrawal).cell(percentChange(r.lowWithdrawal, base->lowWithdrawal));
            w.cell(r.highWithdrawal).cell(percentChange(r.highWithdrawal, base->highWithdrawal));
            w.cell(r.lowPccImport).cell(r.highPccImport).cell(static_cast<long long>(r.converged));
        } else {
            for (int k = 0; k < 9; ++k) w.cell("");
        }
        w.endRow();
        levels.push_back({{"swing", r.swing}, {"ok", r.ok}, {"error", r.error}});
    }
    io::writeTextFile(dir / "tariff_sweep.csv", out.str());

    std::ostringstream prof;
    io::CsvWriter pw(prof);
    pw.header({"swing", "step", "clock_hour", "expected_withdrawal_kw", "expected_pcc_kw", "tariff_per_mwh"});
    for (const auto& r : rows) {
        if (!r.ok) continue;
        const auto tariff = market::swingTariff(model.market.tariffSchedule, model.horizon, r.swing, sweep.lowStart,
                                                 sweep.lowEnd, sweep.highStart, sweep.highEnd);
        for (std::size_t t = 0; t < r.withdrawalProfile.size(); ++t) {
            pw.cell(r.swing).cell(static_cast<long long>(t)).cell(model.horizon.clockHour(t))
                .cell(r.withdrawalProfile[t]).cell(r.pccProfile[t]).cell(tariff[t]);
            pw.endRow();
        }
    }
    io::writeTextFile(dir / "tariff_profiles.csv", prof.str());
    const json doc = {{"format", "vpp-tariff-sweep/1"}, {"levels", levels}, {"stamp", stampJson(stamp)}};
    io::writeTextFile(dir / "tariff_sweep.json", doc.dump(2) + "\n");
}

}  // namespace vpp::app
