#pragma once

#include <cstddef>
#include <vector>

namespace vpp::market {

/// Time axis shared by every emitter. Steps of `stepHours`, reserve
/// capacity windows of `rcmWindowHours`.
struct MarketHorizon {
    std::size_t stepCount = 0;
    double stepHours = 0.25;
    double rcmWindowHours = 4.0;
    double startHour = 0.0;     // clock hour of step 0
    std::vector<int> windowOf;  // step -> window

    [[nodiscard]] std::size_t windowCount() const {
        return windowOf.empty() ? 0 : static_cast<std::size_t>(windowOf.back()) + 1;
    }

    /// Builds the contiguous window map. Throws std::invalid_argument when the
    /// window is not an integer multiple of the step.
    static MarketHorizon uniform(std::size_t steps, double stepHours, double rcmWindowHours,
                                 double startHour = 0.0);
    void validate() const;

    /// Clock hour in [0, 24) at which step t begins.
    [[nodiscard]] double clockHour(std::size_t t) const;
};

}  // namespace vpp::market
