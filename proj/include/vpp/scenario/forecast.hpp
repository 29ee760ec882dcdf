#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "vpp/scenario/error_model.hpp"

namespace vpp::scenario {

/// Point forecast of every uncertain input over the horizon.
/// Prices: energy in currency/MWh, reserve capacity in currency/MW per
/// window. Powers in kW/kvar, temperature in degC, factors as fractions.
struct Forecast {
    std::vector<double> dayAheadPrice;
    std::vector<double> rcmUpPrice;  // per reserve window
    std::vector<double> rcmDnPrice;  // per reserve window
    std::vector<double> ramUpPrice;
    std::vector<double> ramDnPrice;
    std::vector<double> mfrrUpPrice;
    std::vector<double> mfrrDnPrice;
    std::vector<std::vector<double>> capacityFactor;  // [generator][step]
    std::vector<double> ambientTemp;
    std::vector<std::vector<double>> loadActive;    // [node][step]
    std::vector<std::vector<double>> loadReactive;  // [node][step]
    std::vector<double> evAvailability;

    [[nodiscard]] std::size_t stepCount() const { return dayAheadPrice.size(); }
    [[nodiscard]] std::size_t windowCount() const { return rcmUpPrice.size(); }

    /// Throws std::invalid_argument on inconsistent lengths or capacity
    /// factors outside [0, 1].
    void validate() const;

    bool operator==(const Forecast&) const = default;
};

using BaseForecast = Forecast;

struct Scenario {
    Forecast series;
    std::vector<double> imbalanceShort;  // currency/MWh
    std::vector<double> imbalanceLong;   // currency/MWh
    double probability = 1.0;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    std::uint64_t seed = 0;
    ErrorTable errors;

    [[nodiscard]] std::size_t size() const { return scenarios.size(); }
};

/// One realized value per error type, indexed like kAllErrorTypes.
using ErrorDraw = std::array<double, kErrorTypeCount>;

/// Dual-pricing imbalance prices: short pays max(day-ahead, mFRR up),
/// long receives min(day-ahead, mFRR down).
std::pair<std::vector<double>, std::vector<double>> imbalancePrices(const Forecast& draft);

/// Applies one scalar draw per error type to every step (and every device)
/// of its target series. Capacity factors and EV availability are clamped
/// to [0, 1], reserve capacity prices floored at 0. mFRR errors only move
/// the imbalance price inputs.
Scenario applyErrors(const BaseForecast& base, const ErrorTable& table, const ErrorDraw& draw,
                     double probability);

/// n Latin-hypercube scenarios with equal probability 1/n.
ScenarioSet buildScenarios(const BaseForecast& base, const ErrorTable& table, std::size_t n,
                           std::uint64_t seed);

/// The error realizations buildScenarios uses for `n` and `seed`.
std::vector<ErrorDraw> sampleErrorDraws(const ErrorTable& table, std::size_t n, std::uint64_t seed);

}  // namespace vpp::scenario
