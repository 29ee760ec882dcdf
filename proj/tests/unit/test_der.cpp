#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "vpp/app/synthetic.hpp"
#include "vpp/der/emit.hpp"
#include "vpp/lp/simplex.hpp"

using namespace vpp;
using vpp::lp::LinearProgram;
using vpp::lp::SolveStatus;

namespace {

/// Explicit Euler step of the RC building, written independently of the
/// emitter's row layout.
double simulateStep(double temp, double ambient, double power, const der::HeatPump& hp, double dt) {
    const double heatLoss = (ambient - temp) / hp.thermalResistance;
    return temp + dt / hp.thermalCapacitance * (heatLoss + hp.cop * power);
}

double valueOf(const lp::LpSolution& s, int j) { return s.primal[static_cast<std::size_t>(j)]; }

}  // namespace

TEST_CASE("dg bounds follow the capacity factor and inverter headroom") {
    auto sc = testing::flatScenario(3);
    sc.series.capacityFactor[0] = {0.0, 0.6, 1.0};
    const auto h = testing::horizon(3);
    LinearProgram p;
    const der::DistributedGenerator dg{"pv", 0, 0, 5.0, 5.0, 0.1};
    const auto handles = der::emitDg(p, dg, sc, h);
    CHECK(p.variables()[handles.p[0]].upper == 0.0);
    CHECK(p.variables()[handles.p[1]].upper == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(p.variables()[handles.p[2]].upper == 5.0);
    for (int q : handles.q) {
        CHECK(p.variables()[q].lower == 0.0);
        CHECK(p.variables()[q].upper == 0.0);
    }

    LinearProgram p2;
    const der::DistributedGenerator big{"pv", 0, 0, 3.0, 5.0, 0.0};
    const auto h2 = der::emitDg(p2, big, sc, h);
    CHECK(p2.variables()[h2.q[0]].upper == doctest::Approx(4.0));
    CHECK(p2.variables()[h2.q[0]].lower == doctest::Approx(-4.0));
}

TEST_CASE("heat pump recurrence matches a one-step simulator") {
    der::HeatPump hp{"hp", 0, 10.0, 3.0, 5.0, 10.0, 18.0, 22.0, 20.0};
    auto sc = testing::flatScenario(2);
    sc.series.ambientTemp = {0.0, 0.0};
    const auto h = testing::horizon(2, 0.25);
    LinearProgram p;
    const auto handles = der::emitHp(p, hp, sc, h);
    p.setBounds(handles.p[0], 2.0, 2.0);
    for (int j : handles.p) p.setObjectiveCoef(j, 1.0);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double expected = simulateStep(20.0, 0.0, 2.0, hp, 0.25);
    CHECK(expected == doctest::Approx(20.05).epsilon(1e-14));
    CHECK(valueOf(sol, handles.temp[1]) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(valueOf(sol, handles.temp[2]) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("heat pump at thermal equilibrium idles") {
    der::HeatPump hp{"hp", 0, 10.0, 3.0, 5.0, 10.0, 18.0, 22.0, 20.0};
    auto sc = testing::flatScenario(6);
    sc.series.ambientTemp.assign(6, 20.0);
    LinearProgram p;
    const auto handles = der::emitHp(p, hp, sc, testing::horizon(6));
    for (int j : handles.p) p.setObjectiveCoef(j, 1.0);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
    for (int j : handles.temp) CHECK(valueOf(sol, j) == doctest::Approx(20.0));
}

TEST_CASE("undersized heat pump cannot hold the comfort band") {
    der::HeatPump hp{"hp", 0, 1.0, 3.0, 2.0, 5.0, 19.0, 23.0, 21.0};
    auto sc = testing::flatScenario(8);
    sc.series.ambientTemp.assign(8, -20.0);  // cop * P = 3 < (19 + 20) / 2
    LinearProgram p;
    der::emitHp(p, hp, sc, testing::horizon(8, 1.0));
    CHECK(lp::solve(p).status == SolveStatus::Infeasible);
}

TEST_CASE("ev examples") {
    const auto h = testing::horizon(4, 0.25);
    SUBCASE("already full with no rate requirement idles") {
        der::EvChargingEvent ev{"ev", 0, 0, 4, 40.0, 40.0, 11.0, 11.0, 0.9, 0.9, 0.0, 0.0};
        LinearProgram p;
        const auto handles = der::emitEv(p, ev, testing::flatScenario(4), h);
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == SolveStatus::Optimal);
        std::vector<double> zeros(p.variableCount(), 0.0);
        for (int j : handles.soc) zeros[static_cast<std::size_t>(j)] = 40.0;
        CHECK(p.maxViolation(zeros) == 0.0);
    }
    SUBCASE("minimum average rate of 7 kW over one hour") {
        der::EvChargingEvent ev{"ev", 0, 0, 4, 60.0, 10.0, 11.0, 11.0, 0.9, 0.9, 7.0, 0.0};
        LinearProgram p;
        const auto handles = der::emitEv(p, ev, testing::flatScenario(4), h);
        for (int j : handles.charge) p.setObjectiveCoef(j, 1.0);
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == SolveStatus::Optimal);
        double net = 0.0;
        for (std::size_t k = 0; k < 4; ++k) net += (valueOf(sol, handles.charge[k]) - valueOf(sol, handles.discharge[k])) * 0.25;
        CHECK(net == doctest::Approx(7.0).epsilon(1e-9));
    }
    SUBCASE("charging efficiency in the state of charge") {
        der::EvChargingEvent ev{"ev", 0, 1, 2, 60.0, 10.0, 11.0, 11.0, 0.9, 0.9, 0.0, 0.0};
        LinearProgram p;
        const auto handles = der::emitEv(p, ev, testing::flatScenario(4), h);
        p.setBounds(handles.charge[0], 10.0, 10.0);
        p.setBounds(handles.discharge[0], 0.0, 0.0);
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(valueOf(sol, handles.soc[1]) - valueOf(sol, handles.soc[0]) == doctest::Approx(2.25).epsilon(1e-12));
    }
    SUBCASE("window outside the horizon") {
        der::EvChargingEvent ev{"ev", 0, 2, 6, 60.0, 10.0, 11.0, 11.0, 0.9, 0.9, 0.0, 0.0};
        LinearProgram p;
        CHECK_THROWS_AS(der::emitEv(p, ev, testing::flatScenario(4), h), std::invalid_argument);
    }
}

TEST_CASE("zero availability pins ev power to zero") {
    auto sc = testing::flatScenario(4);
    sc.series.evAvailability = {1.0, 0.0, 0.0, 1.0};
    der::EvChargingEvent ev{"ev", 0, 0, 4, 60.0, 10.0, 11.0, 11.0, 0.9, 0.9, 0.0, 0.0};
    LinearProgram p;
    const auto handles = der::emitEv(p, ev, sc, testing::horizon(4));
    for (std::size_t k : {1u, 2u}) {
        CHECK(p.variables()[handles.charge[k]].upper == 0.0);
        CHECK(p.variables()[handles.discharge[k]].upper == 0.0);
    }
}

TEST_CASE("bess terminal tie and round-trip losses") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> price(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        const der::Bess bess{"b", 0, 20.0, 8.0, 8.0, 0.9, 0.85, 0.0, 0.0};
        const auto h = testing::horizon(12, 0.5);
        LinearProgram p;
        const auto handles = der::emitBess(p, bess, testing::flatScenario(12), h);
        for (std::size_t t = 0; t < 12; ++t) {
            const double c = price(rng);
            p.setObjectiveCoef(handles.charge[t], c);
            p.setObjectiveCoef(handles.discharge[t], -c);
        }
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == SolveStatus::Optimal);
        double charged = 0.0, discharged = 0.0;
        for (std::size_t t = 0; t < 12; ++t) {
            charged += valueOf(sol, handles.charge[t]) * 0.5;
            discharged += valueOf(sol, handles.discharge[t]) * 0.5;
        }
        CHECK(discharged <= 0.9 * 0.85 * charged + 1e-7);
        CHECK(std::abs(valueOf(sol, handles.soc.back()) - valueOf(sol, handles.soc.front())) <= 1e-7);
    }
}

TEST_CASE("bess without cycle cost or price spread stays idle at zero cost") {
    const der::Bess bess{"b", 0, 20.0, 8.0, 10.0, 0.95, 0.95, 10.0, 0.0};
    LinearProgram p;
    const auto handles = der::emitBess(p, bess, testing::flatScenario(8), testing::horizon(8));
    p.addObjective(handles.cost);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == 0.0);
    // the all-idle dispatch is feasible, so it is among the optima
    std::vector<double> idle(p.variableCount(), 0.0);
    for (int j : handles.soc) idle[static_cast<std::size_t>(j)] = 10.0;
    CHECK(p.maxViolation(idle) == 0.0);
    CHECK(p.objectiveValue(idle) == 0.0);
}

TEST_CASE("operating cost examples") {
    const auto h = testing::horizon(4, 0.25);
    SUBCASE("zero coefficients give an identically zero expression") {
        der::DerPark park;
        park.generators.push_back({"g", 0, 0, 5.0, 5.0, 0.0});
        park.batteries.push_back({"b", 0, 10.0, 5.0, 5.0, 1.0, 1.0, 5.0, 0.0});
        LinearProgram p;
        const auto handles = der::emitPark(p, park, testing::flatScenario(4), h);
        const auto cost = der::parkOperatingCost(handles).canonical();
        CHECK(cost.terms().empty());
        CHECK(cost.constant() == 0.0);
    }
    SUBCASE("one generator at 2 kW for an hour at 0.1 per kWh") {
        LinearProgram p;
        der::DerPark park;
        park.generators.push_back({"g", 0, 0, 5.0, 5.0, 0.1});
        const auto handles = der::emitPark(p, park, testing::flatScenario(4), h);
        std::vector<double> x(p.variableCount(), 0.0);
        for (int j : handles.generators[0].p) x[static_cast<std::size_t>(j)] = 2.0;
        CHECK(der::parkOperatingCost(handles).evaluate(x) == doctest::Approx(0.2).epsilon(1e-15));
    }
    SUBCASE("mixed park equals the sum of per-device costs") {
        const auto inst = app::syntheticInstance({});
        const auto& park = inst.model.park;
        const auto sc = testing::flatScenario(8, 2, 2, 5);
        const auto h8 = market::MarketHorizon::uniform(8, 1.0, 4.0);
        LinearProgram p;
        const auto handles = der::emitPark(p, park, sc, h8);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 5.0);
        std::vector<double> x(p.variableCount());
        for (double& v : x) v = u(rng);
        double manual = 0.0;
        for (std::size_t d = 0; d < park.generators.size(); ++d)
            for (int j : handles.generators[d].p) manual += park.generators[d].marginalCost * x[j] * 1.0;
        for (std::size_t d = 0; d < park.evEvents.size(); ++d)
            for (int j : handles.evEvents[d].discharge) manual += park.evEvents[d].dischargeCompensation * x[j];
        for (std::size_t d = 0; d < park.batteries.size(); ++d) {
            for (int j : handles.batteries[d].charge) manual += park.batteries[d].cycleCost * x[j];
            for (int j : handles.batteries[d].discharge) manual += park.batteries[d].cycleCost * x[j];
        }
        CHECK(der::parkOperatingCost(handles).evaluate(x) == doctest::Approx(manual).epsilon(1e-12));
    }
}

TEST_CASE("park validation and csv round trip") {
    const auto inst = app::syntheticInstance({});
    const auto& park = inst.model.park;
    double storage = 0.0, pv = 0.0, hp = 0.0;
    for (const auto& b : park.batteries) storage += b.energyCapacity;
    for (const auto& g : park.generators) pv += g.nominalPower;
    for (const auto& h : park.heatPumps) hp += h.maxElecPower;
    CHECK(storage == 75.0);
    CHECK(pv == 150.0);
    CHECK(hp == 85.0);

    const auto dir = std::filesystem::temp_directory_path() / "vpp_der_roundtrip";
    std::filesystem::remove_all(dir);
    der::saveDerPark(park, dir);
    const auto loaded = der::loadDerPark(dir);
    REQUIRE(loaded.batteries.size() == park.batteries.size());
    double loadedStorage = 0.0;
    for (const auto& b : loaded.batteries) loadedStorage += b.energyCapacity;
    CHECK(loadedStorage == 75.0);
    CHECK(loaded.evEvents.size() == park.evEvents.size());
    CHECK(loaded.evEvents[1].minAvgChargeRate == park.evEvents[1].minAvgChargeRate);
    CHECK(loaded.heatPumps[0].thermalCapacitance == park.heatPumps[0].thermalCapacitance);
    std::filesystem::remove_all(dir);

    der::DerPark bad = park;
    bad.generators[0].node = 99;
    CHECK_THROWS_AS(bad.validate(5), std::invalid_argument);
    bad = park;
    bad.heatPumps[0].initialTemp = 30.0;
    CHECK_THROWS_AS(bad.validate(5), std::invalid_argument);
    bad = park;
    bad.evEvents[0].departure = bad.evEvents[0].arrival;
    CHECK_THROWS_AS(bad.validate(5), std::invalid_argument);
}
