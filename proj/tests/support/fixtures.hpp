#pragma once

#include <vector>

#include "vpp/market/horizon.hpp"
#include "vpp/scenario/forecast.hpp"

namespace vpp::testing {

/// Flat scenario: zero prices and loads, unit capacity factors, full EV
/// availability, 10 degC ambient.
inline scenario::Scenario flatScenario(std::size_t steps, std::size_t windows = 1, std::size_t profiles = 1,
                                       std::size_t nodes = 1) {
    scenario::Scenario s;
    auto& f = s.series;
    f.dayAheadPrice.assign(steps, 0.0);
    f.rcmUpPrice.assign(windows, 0.0);
    f.rcmDnPrice.assign(windows, 0.0);
    f.ramUpPrice.assign(steps, 0.0);
    f.ramDnPrice.assign(steps, 0.0);
    f.mfrrUpPrice.assign(steps, 0.0);
    f.mfrrDnPrice.assign(steps, 0.0);
    f.capacityFactor.assign(profiles, std::vector<double>(steps, 1.0));
    f.ambientTemp.assign(steps, 10.0);
    f.loadActive.assign(nodes, std::vector<double>(steps, 0.0));
    f.loadReactive.assign(nodes, std::vector<double>(steps, 0.0));
    f.evAvailability.assign(steps, 1.0);
    s.imbalanceShort.assign(steps, 0.0);
    s.imbalanceLong.assign(steps, 0.0);
    s.probability = 1.0;
    return s;
}

inline market::MarketHorizon horizon(std::size_t steps, double stepHours = 0.25, double window = 0.0) {
    return market::MarketHorizon::uniform(steps, stepHours, window > 0.0 ? window : steps * stepHours);
}

}  // namespace vpp::testing
