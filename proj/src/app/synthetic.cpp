#include "vpp/app/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vpp/app/config.hpp"
#include "vpp/grid/network.hpp"
#include "vpp/io/csv.hpp"
#include "vpp/market/market.hpp"
#include "vpp/scenario/rng.hpp"
#include "vpp/scenario/scenario_io.hpp"

namespace vpp::app {

namespace {

/// Smooth bump centred at `centre` with half-width `width` hours.
double bump(double hour, double centre, double width) {
    const double d = std::remainder(hour - centre, 24.0) / width;
    return std::abs(d) >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(std::numbers::pi * d));
}

double solar(double hour, double stepHours) {
    const double mid = std::fmod(hour + 0.5 * stepHours, 24.0);
    return mid <= 6.0 || mid >= 18.0 ? 0.0 : std::sin(std::numbers::pi * (mid - 6.0) / 12.0);
}

int busFor(std::size_t k, std::size_t buses) {
    return buses <= 1 ? 0 : static_cast<int>(1 + k % (buses - 1));
}

}  // namespace

double stepClockHour(const SyntheticSpec& spec, std::size_t t) {
    return market::MarketHorizon::uniform(1, spec.stepHours, spec.stepHours, spec.startHour).clockHour(t);
}

Instance syntheticInstance(const SyntheticSpec& spec) {
    Instance inst;
    auto& m = inst.model;
    m.network = grid::syntheticFeeder(spec.buses, spec.seed);
    m.horizon = market::MarketHorizon::uniform(spec.steps, spec.stepHours, spec.rcmWindowHours, spec.startHour);
    m.flowSegments = spec.flowSegments;
    scenario::CounterRng rng(spec.seed, 0xDE5C);

    auto& park = m.park;
    for (std::size_t k = 0; k < 3; ++k) {
        park.generators.push_back({"pv" + std::to_string(k), busFor(k, spec.buses), static_cast<int>(k % 2), 50.0,
                                   55.0, 0.0});
    }
    park.heatPumps.push_back({"hp0", busFor(1, spec.buses), 45.0, 3.0, 0.16, 20.0, 19.0, 23.0, 21.0});
    park.heatPumps.push_back({"hp1", busFor(2, spec.buses), 40.0, 3.0, 0.18, 18.0, 19.0, 23.0, 21.0});
    park.batteries.push_back({"bess0", busFor(0, spec.buses), 50.0, 25.0, 27.5, 0.95, 0.95, 25.0, 0.01});
    park.batteries.push_back({"bess1", busFor(3, spec.buses), 25.0, 12.5, 13.75, 0.95, 0.95, 12.5, 0.01});
    const double windows[3][2] = {{0.1, 0.6}, {0.25, 0.85}, {0.5, 1.0}};
    for (std::size_t k = 0; k < 3; ++k) {
        der::EvChargingEvent ev;
        ev.id = "ev" + std::to_string(k);
        ev.node = busFor(k + 1, spec.buses);
        const auto steps = static_cast<double>(spec.steps);
        ev.arrival = static_cast<int>(std::floor(windows[k][0] * steps));
        ev.departure = std::max(ev.arrival + 1, static_cast<int>(std::floor(windows[k][1] * steps)));
        ev.batteryCapacity = 60.0;
        ev.arrivalSoc = 20.0;
        ev.maxChargePower = 11.0;
        ev.maxDischargePower = 11.0;
        ev.chargeEff = 0.92;
        ev.dischargeEff = 0.92;
        const double hours = (ev.departure - ev.arrival) * spec.stepHours;
        ev.minAvgChargeRate = std::min(7.0, 0.5 * (ev.batteryCapacity - ev.arrivalSoc) / hours);
        ev.dischargeCompensation = 0.05;
        park.evEvents.push_back(ev);
    }

    auto& f = inst.forecast;
    const std::size_t T = spec.steps;
    f.capacityFactor.assign(2, std::vector<double>(T));
    f.loadActive.assign(spec.buses, std::vector<double>(T, 0.0));
    f.loadReactive.assign(spec.buses, std::vector<double>(T, 0.0));
    std::vector<double> busScale(spec.buses);
    // Total load stays near that of a five-bus feeder whatever the size.
    const double spread = 4.0 / static_cast<double>(std::max<std::size_t>(spec.buses - 1, 1));
    for (std::size_t i = 1; i < spec.buses; ++i) busScale[i] = spread * (10.0 + 15.0 * rng.uniform());
    for (std::size_t t = 0; t < T; ++t) {
        const double h = stepClockHour(spec, t);
        f.dayAheadPrice.push_back(80.0 + 30.0 * bump(h, 8.0, 3.0) + 60.0 * bump(h, 19.0, 4.0) -
                                  25.0 * bump(h, 13.0, 3.0));
        f.ramUpPrice.push_back(95.0 + 40.0 * bump(h, 19.0, 4.0));
        f.ramDnPrice.push_back(25.0 - 10.0 * bump(h, 13.0, 3.0));
        f.mfrrUpPrice.push_back(160.0 + 60.0 * bump(h, 19.0, 4.0));
        f.mfrrDnPrice.push_back(20.0);
        f.ambientTemp.push_back(3.0 + 4.0 * bump(h, 14.0, 8.0));
        f.evAvailability.push_back(0.8);
        f.capacityFactor[0][t] = 0.9 * solar(h, spec.stepHours);
        f.capacityFactor[1][t] = 0.75 * solar(h, spec.stepHours);
        for (std::size_t i = 1; i < spec.buses; ++i) {
            const double shape = 0.45 + 0.3 * bump(h, 7.5, 2.5) + 0.9 * bump(h, 19.0, 3.5);
            f.loadActive[i][t] = busScale[i] * shape;
            f.loadReactive[i][t] = 0.3 * f.loadActive[i][t];
        }
    }
    for (std::size_t w = 0; w < m.horizon.windowCount(); ++w) {
        f.rcmUpPrice.push_back(8.0 + 2.0 * static_cast<double>(w % 3));
        f.rcmDnPrice.push_back(5.0 + static_cast<double>(w % 2));
    }

    m.market.prequalifiedPower = spec.prequalifiedPower;
    m.market.tariffSchedule = market::expandHourly(spec.hourlyTariff, m.horizon);
    m.market.damCap = defaultDamCap(park, f);
    m.finalize();
    return inst;
}

std::filesystem::path writeSyntheticInstance(const SyntheticSpec& spec, const std::filesystem::path& dir,
                                             const nlohmann::json& overrides) {
    const auto inst = syntheticInstance(spec);
    std::filesystem::create_directories(dir / "network");
    std::filesystem::create_directories(dir / "der");
    grid::saveNetwork(inst.model.network, dir / "network");
    der::saveDerPark(inst.model.park, dir / "der");
    scenario::saveForecast(inst.forecast, inst.model.horizon.windowOf, dir / "forecast.csv");

    nlohmann::json config = {
        {"instance",
         {{"network_dir", "network"},
          {"der_dir", "der"},
          {"forecast_file", "forecast.csv"},
          {"base_mva", inst.model.network.baseMVA},
          {"base_kv", inst.model.network.baseKV}}},
        {"horizon",
         {{"steps", spec.steps},
          {"step_hours", spec.stepHours},
          {"rcm_window_hours", spec.rcmWindowHours},
          {"start_hour", spec.startHour}}},
        {"market", {{"prequalified_power_kw", spec.prequalifiedPower}, {"tariff_hourly_per_mwh", spec.hourlyTariff}}},
        {"grid", {{"flow_segments", spec.flowSegments}}},
        {"scenarios", {{"count", 10}, {"seed", 42}, {"dir", "scenarios"}}},
        {"risk", {{"measure", "neutral"}, {"alpha", 0.9}}},
        {"solver", {{"method", "benders"}, {"tolerance", 1e-6}, {"max_iterations", 200}, {"workers", 1},
                    {"output_dir", "out"}}},
        {"tariff_sweep", {{"levels", "0:1:0.1"},
                          {"low_window_hours", {10.0, 14.0}},
                          {"high_window_hours", {17.0, 21.0}},
                          {"method", "extensive"}}},
    };
    config.merge_patch(overrides);
    const auto file = dir / "config.json";
    io::writeTextFile(file, config.dump(2) + "\n");
    return file;
}

}  // namespace vpp::app
