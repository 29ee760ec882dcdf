#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "vpp/app/synthetic.hpp"
#include "vpp/scenario/error_model.hpp"
#include "vpp/stochastic/extensive.hpp"

using namespace vpp;
using stochastic::RiskMeasure;

namespace {

/// Rockafellar-Uryasev oracle: the minimum over gamma is attained at an
/// atom, so evaluating the objective at every atom and keeping the best is
/// exact.
double ruOracle(const std::vector<double>& c, const std::vector<double>& p, double alpha) {
    double best = std::numeric_limits<double>::infinity();
    for (double gamma : c) {
        long double acc = 0.0L;
        for (std::size_t s = 0; s < c.size(); ++s) acc += p[s] * std::max(0.0, c[s] - gamma);
        best = std::min(best, gamma + static_cast<double>(acc) / (1.0 - alpha));
    }
    return best;
}

app::Instance tinyInstance() {
    app::SyntheticSpec spec;
    spec.buses = 3;
    spec.steps = 4;
    spec.startHour = 16.0;
    spec.rcmWindowHours = 2.0;
    return app::syntheticInstance(spec);
}

scenario::ScenarioSet tinyScenarios(const app::Instance& inst, std::size_t n, std::uint64_t seed = 5) {
    return scenario::buildScenarios(inst.forecast, scenario::defaultErrorTable(), n, seed);
}

stochastic::ExtensiveSolution solve(const stochastic::VppModel& m, const scenario::ScenarioSet& set,
                                    const RiskMeasure& risk) {
    const auto ef = stochastic::buildExtensive(m, set, risk);
    return stochastic::solveExtensive(ef, m, set);
}

std::vector<double> probabilities(const scenario::ScenarioSet& set) {
    std::vector<double> p;
    for (const auto& s : set.scenarios) p.push_back(s.probability);
    return p;
}

}  // namespace

TEST_CASE("cvarOfSamples fixtures") {
    const std::vector<double> half{0.5, 0.5};
    for (double a : {0.1, 0.5, 0.9, 0.999}) {
        const std::vector<double> c{4.2, 4.2};
        CHECK(stochastic::cvarOfSamples(c, half, a) == doctest::Approx(4.2).epsilon(1e-15));
    }
    CHECK(stochastic::cvarOfSamples(std::vector<double>{0.0, 10.0}, half, 0.5) == 10.0);
    std::vector<double> ten(10), p10(10, 0.1);
    std::iota(ten.begin(), ten.end(), 1.0);
    CHECK(stochastic::cvarOfSamples(ten, p10, 0.9) == doctest::Approx(10.0).epsilon(1e-12));
    // tail of 0.15: all of 10 and half of 9
    CHECK(stochastic::cvarOfSamples(ten, p10, 0.85) == doctest::Approx((10.0 * 0.1 + 9.0 * 0.05) / 0.15).epsilon(1e-12));
}

TEST_CASE("cvarOfSamples rejects bad input") {
    const std::vector<double> c{1.0, 2.0}, p{0.5, 0.5};
    CHECK_THROWS_AS(stochastic::cvarOfSamples(std::vector<double>{}, std::vector<double>{}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(stochastic::cvarOfSamples(c, p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stochastic::cvarOfSamples(c, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(stochastic::cvarOfSamples(c, std::vector<double>{0.5, 0.6}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(stochastic::cvarOfSamples(c, std::vector<double>{1.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(RiskMeasure::cvar(1.2), std::invalid_argument);
}

TEST_CASE("cvarOfSamples matches the Rockafellar-Uryasev minimum") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-100.0, 100.0), w(0.01, 1.0), a(0.01, 0.99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 17);
        std::vector<double> c(n), p(n);
        for (auto& v : c) v = trial % 3 == 0 ? std::round(u(rng) / 20.0) : u(rng);  // ties on every third trial
        for (auto& v : p) v = trial % 2 == 0 ? 1.0 / static_cast<double>(n) : w(rng);
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& v : p) v /= sum;
        const double alpha = trial % 5 == 0 ? 1.0 - 1.0 / static_cast<double>(n + 1) : a(rng);
        const double cv = stochastic::cvarOfSamples(c, p, alpha);
        CHECK(cv == doctest::Approx(ruOracle(c, p, alpha)).epsilon(1e-10));
        CHECK(cv >= stochastic::expectationOfSamples(c, p) - 1e-9);
        CHECK(cv <= *std::max_element(c.begin(), c.end()) + 1e-9);
        CHECK(stochastic::cvarOfSamples(c, p, std::min(0.995, alpha + 0.05)) >= cv - 1e-9);
    }
}

TEST_CASE("single scenario: expectation and cvar agree with the scenario cost") {
    const auto inst = tinyInstance();
    const auto set = tinyScenarios(inst, 1);
    const auto e = solve(inst.model, set, RiskMeasure::expectation());
    CHECK(e.objective == doctest::Approx(e.breakdowns[0].total).epsilon(1e-9));
    for (double a : {0.5, 0.9}) {
        const auto c = solve(inst.model, set, RiskMeasure::cvar(a));
        CHECK(c.objective == doctest::Approx(e.objective).epsilon(1e-7));
    }
}

TEST_CASE("three scenarios at alpha 2/3 price the worst scenario") {
    const auto inst = tinyInstance();
    const auto set = tinyScenarios(inst, 3);
    const auto c = solve(inst.model, set, RiskMeasure::cvar(2.0 / 3.0));
    const auto costs = stochastic::totals(c.breakdowns);
    CHECK(c.objective == doctest::Approx(*std::max_element(costs.begin(), costs.end())).epsilon(1e-7));
}

TEST_CASE("zero prices and zero device costs give a zero objective") {
    auto inst = tinyInstance();
    auto& park = inst.model.park;
    for (auto& g : park.generators) g.marginalCost = 0.0;
    for (auto& b : park.batteries) b.cycleCost = 0.0;
    for (auto& e : park.evEvents) e.dischargeCompensation = 0.0;
    std::fill(inst.model.market.tariffSchedule.begin(), inst.model.market.tariffSchedule.end(), 0.0);
    auto set = tinyScenarios(inst, 2);
    for (auto& s : set.scenarios) {
        auto& f = s.series;
        for (auto* v : {&f.dayAheadPrice, &f.rcmUpPrice, &f.rcmDnPrice, &f.ramUpPrice, &f.ramDnPrice, &f.mfrrUpPrice,
                        &f.mfrrDnPrice, &s.imbalanceShort, &s.imbalanceLong})
            std::fill(v->begin(), v->end(), 0.0);
    }
    CHECK(solve(inst.model, set, RiskMeasure::expectation()).objective == doctest::Approx(0.0));
}

TEST_CASE("removing prequalified power weakly worsens the optimum") {
    auto inst = tinyInstance();
    const auto set = tinyScenarios(inst, 3);
    const double base = solve(inst.model, set, RiskMeasure::expectation()).objective;
    inst.model.market.prequalifiedPower = 0.0;
    const auto tight = solve(inst.model, set, RiskMeasure::expectation());
    CHECK(tight.objective >= base - 1e-9);
    for (double v : tight.firstStage.rcmUp) CHECK(v == 0.0);
}

TEST_CASE("objective reconstruction and non-anticipativity") {
    const auto inst = tinyInstance();
    const auto set = tinyScenarios(inst, 4);
    const auto probs = probabilities(set);
    for (const auto risk : {RiskMeasure::expectation(), RiskMeasure::cvar(0.75)}) {
        const auto ef = stochastic::buildExtensive(inst.model, set, risk);
        const auto sol = stochastic::solveExtensive(ef, inst.model, set);
        const auto costs = stochastic::totals(sol.breakdowns);
        CHECK(sol.objective == doctest::Approx(stochastic::riskOfSamples(risk, costs, probs)).epsilon(1e-6));
        for (const auto& b : sol.breakdowns) {
            CHECK(b.total == doctest::Approx(-(b.revenueDam + b.revenueRcm + b.revenueRam) + b.operations + b.tariff +
                                             b.imbalance)
                                 .epsilon(1e-12));
        }

        // every first-stage column is referenced from every scenario block
        const auto& rows = ef.program.constraints();
        std::vector<std::vector<char>> seen(ef.program.variableCount(), std::vector<char>(set.size(), 0));
        std::vector<int> owner(ef.program.variableCount(), -1);
        for (std::size_t s = 0; s < ef.blocks.size(); ++s) {
            for (int j : ef.blocks[s].market.vpp) owner[static_cast<std::size_t>(j)] = static_cast<int>(s);
            for (const auto* v : {&ef.blocks[s].market.ramUp, &ef.blocks[s].market.ramDn})
                for (int j : *v) owner[static_cast<std::size_t>(j)] = static_cast<int>(s);
        }
        for (const auto& row : rows) {
            int block = -1;
            for (const auto& term : row.terms)
                if (owner[static_cast<std::size_t>(term.var)] >= 0) block = owner[static_cast<std::size_t>(term.var)];
            if (block < 0) continue;
            for (const auto& term : row.terms) seen[static_cast<std::size_t>(term.var)][block] = 1;
        }
        for (int j : ef.first.all())
            for (std::size_t s = 0; s < set.size(); ++s) CHECK(seen[static_cast<std::size_t>(j)][s] == 1);
        // one shared copy: first-stage indices precede every block variable
        const auto firstCols = ef.first.all();
        const int lastFirst = *std::max_element(firstCols.begin(), firstCols.end());
        for (const auto& block : ef.blocks)
            for (int j : block.market.vpp) CHECK(j > lastFirst);
    }
}

TEST_CASE("risk ordering between the two optimal strategies") {
    const auto inst = tinyInstance();
    const auto set = tinyScenarios(inst, 6, 11);
    const auto probs = probabilities(set);
    const auto e = solve(inst.model, set, RiskMeasure::expectation());
    const auto c = solve(inst.model, set, RiskMeasure::cvar(0.8));
    const auto ec = stochastic::totals(e.breakdowns);
    const auto cc = stochastic::totals(c.breakdowns);
    CHECK(stochastic::cvarOfSamples(cc, probs, 0.8) <= stochastic::cvarOfSamples(ec, probs, 0.8) + 1e-6);
    CHECK(stochastic::expectationOfSamples(cc, probs) >= e.objective - 1e-6);
}

TEST_CASE("errors") {
    const auto inst = tinyInstance();
    scenario::ScenarioSet empty;
    CHECK_THROWS_AS(stochastic::buildExtensive(inst.model, empty, RiskMeasure::expectation()), std::invalid_argument);

    auto cold = inst;
    auto set = tinyScenarios(cold, 3);
    for (auto& hp : cold.model.park.heatPumps) hp.maxElecPower = 0.5;
    set.scenarios[1].series.ambientTemp.assign(4, -40.0);
    set.scenarios[0].series.ambientTemp.assign(4, 21.0);
    set.scenarios[2].series.ambientTemp.assign(4, 21.0);
    try {
        solve(cold.model, set, RiskMeasure::expectation());
        FAIL("expected InfeasibleModel");
    } catch (const stochastic::InfeasibleModel& e) {
        CHECK(std::string(e.what()).find("scenario 1") != std::string::npos);
    }
}
