#pragma once

#include <vector>

#include "vpp/der/devices.hpp"
#include "vpp/lp/linear_program.hpp"
#include "vpp/market/horizon.hpp"
#include "vpp/scenario/forecast.hpp"

namespace vpp::der {

using lp::LinearExpr;
using lp::LinearProgram;

struct DgHandles {
    std::vector<int> p;  // kW
    std::vector<int> q;  // kvar
    LinearExpr cost;
};

struct HpHandles {
    std::vector<int> p;
    std::vector<int> temp;  // stepCount + 1 states, temp[0] fixed
};

/// Indices run over the event window; soc has one more entry than p.
struct EvHandles {
    int firstStep = 0;
    std::vector<int> charge;
    std::vector<int> discharge;
    std::vector<int> soc;
    LinearExpr cost;
};

struct BessHandles {
    std::vector<int> charge;
    std::vector<int> discharge;
    std::vector<int> q;
    std::vector<int> soc;
    LinearExpr cost;
};

struct ParkHandles {
    std::vector<DgHandles> generators;
    std::vector<HpHandles> heatPumps;
    std::vector<EvHandles> evEvents;
    std::vector<BessHandles> batteries;
};

DgHandles emitDg(LinearProgram& program, const DistributedGenerator& dg,
                 const scenario::Scenario& scenario, const market::MarketHorizon& horizon);
HpHandles emitHp(LinearProgram& program, const HeatPump& hp, const scenario::Scenario& scenario,
                 const market::MarketHorizon& horizon);
/// Throws std::invalid_argument when the window leaves the horizon.
EvHandles emitEv(LinearProgram& program, const EvChargingEvent& ev,
                 const scenario::Scenario& scenario, const market::MarketHorizon& horizon);
BessHandles emitBess(LinearProgram& program, const Bess& bess, const scenario::Scenario& scenario,
                     const market::MarketHorizon& horizon);

ParkHandles emitPark(LinearProgram& program, const DerPark& park,
                     const scenario::Scenario& scenario, const market::MarketHorizon& horizon);

/// Operating and compensation cost of the whole park, currency.
LinearExpr parkOperatingCost(const ParkHandles& handles);

/// Device injections per node and step (kW / kvar, injection positive).
struct NodalDevicePower {
    std::vector<std::vector<LinearExpr>> active;    // [node][step]
    std::vector<std::vector<LinearExpr>> reactive;  // [node][step]
};

NodalDevicePower nodalDevicePower(const DerPark& park, const ParkHandles& handles,
                                  std::size_t nodeCount, std::size_t stepCount);

}  // namespace vpp::der
