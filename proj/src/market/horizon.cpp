#include "vpp/market/horizon.hpp"

#include <cmath>
#include <stdexcept>

namespace vpp::market {

MarketHorizon MarketHorizon::uniform(std::size_t steps, double stepHours, double rcmWindowHours,
                                     double startHour) {
    if (steps == 0) throw std::invalid_argument("horizon needs at least one step");
    if (!(stepHours > 0.0) || !(rcmWindowHours > 0.0)) {
        throw std::invalid_argument("step and window lengths must be positive");
    }
    if (!(startHour >= 0.0 && startHour < 24.0)) throw std::invalid_argument("start hour outside [0, 24)");
    const double ratio = rcmWindowHours / stepHours;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw std::invalid_argument("reserve window is not an integer multiple of the step");
    }
    MarketHorizon h;
    h.stepCount = steps;
    h.stepHours = stepHours;
    h.rcmWindowHours = rcmWindowHours;
    h.startHour = startHour;
    const auto perWindow = static_cast<std::size_t>(rounded);
    h.windowOf.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) h.windowOf[t] = static_cast<int>(t / perWindow);
    return h;
}

void MarketHorizon::validate() const {
    if (windowOf.size() != stepCount || stepCount == 0) {
        throw std::invalid_argument("window map length differs from step count");
    }
    if (windowOf.front() != 0) throw std::invalid_argument("window map must start at 0");
    for (std::size_t t = 1; t < stepCount; ++t) {
        const int d = windowOf[t] - windowOf[t - 1];
        if (d != 0 && d != 1) throw std::invalid_argument("window map not monotone and surjective");
    }
}

double MarketHorizon::clockHour(std::size_t t) const {
    return std::fmod(startHour + static_cast<double>(t) * stepHours, 24.0);
}

}  // namespace vpp::market
