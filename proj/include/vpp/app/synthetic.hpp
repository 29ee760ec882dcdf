#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <vector>

#include "vpp/scenario/error_model.hpp"
#include "vpp/scenario/forecast.hpp"
#include "vpp/stochastic/model.hpp"

namespace vpp::app {

struct SyntheticSpec {
    std::size_t buses = 5;
    std::size_t steps = 8;
    double stepHours = 1.0;
    double startHour = 8.0;  // clock hour of step 0
    double rcmWindowHours = 4.0;
    double prequalifiedPower = 50.0;  // kW
    std::vector<double> hourlyTariff = std::vector<double>(24, 206.5);
    int flowSegments = 8;
    std::uint64_t seed = 7;
};

struct Instance {
    stochastic::VppModel model;
    scenario::BaseForecast forecast;
};

/// Radial feeder with 150 kWp PV, 85 kW of heat pumps, 75 kWh of storage
/// and three EV sessions, plus smooth price and weather forecasts.
Instance syntheticInstance(const SyntheticSpec& spec);

/// Writes network/, der/, forecast.csv and config.json into `dir` and returns
/// the config path. `overrides` is merge-patched into the config document.
std::filesystem::path writeSyntheticInstance(const SyntheticSpec& spec, const std::filesystem::path& dir,
                                             const nlohmann::json& overrides = nlohmann::json::object());

/// Clock hour at the start of step `t`.
double stepClockHour(const SyntheticSpec& spec, std::size_t t);

}  // namespace vpp::app
