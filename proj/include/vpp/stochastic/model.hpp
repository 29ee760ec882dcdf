#pragma once

#include <stdexcept>
#include <vector>

#include "vpp/der/emit.hpp"
#include "vpp/grid/distflow.hpp"
#include "vpp/grid/network.hpp"
#include "vpp/market/market.hpp"
#include "vpp/scenario/forecast.hpp"

namespace vpp::stochastic {

/// Immutable description of one VPP instance. Shared read-only by every
/// scenario build.
struct VppModel {
    grid::RadialNetwork network;
    grid::Topology topology;
    der::DerPark park;
    market::MarketHorizon horizon;
    market::MarketConfig market;
    int flowSegments = 8;

    /// Validates every part and fills `topology`.
    void finalize();
    /// Throws std::invalid_argument when the scenario does not fit the model.
    void checkScenario(const scenario::Scenario& s) const;
};

/// Everything one scenario contributes to a program.
struct ScenarioBlock {
    der::ParkHandles park;
    grid::GridHandles grid;
    market::SecondStageHandles market;
    market::CostComponents costs;
    lp::LinearExpr total;  // C_s in currency
};

ScenarioBlock emitScenarioBlock(lp::LinearProgram& program, const VppModel& model,
                                const scenario::Scenario& scenario,
                                const market::FirstStageHandles& first);

/// First-stage values in the order dam[t], rcmUp[w], rcmDn[w].
struct FirstStageDecision {
    std::vector<double> dam;
    std::vector<double> rcmUp;
    std::vector<double> rcmDn;

    [[nodiscard]] std::vector<double> flatten() const;
    static FirstStageDecision unflatten(const std::vector<double>& x, std::size_t steps,
                                        std::size_t windows);
};

FirstStageDecision readFirstStage(const market::FirstStageHandles& first,
                                  const std::vector<double>& primal);

/// Raised when the model admits no solution; the message names the block.
class InfeasibleModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vpp::stochastic
