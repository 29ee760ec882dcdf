#include "vpp/der/emit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vpp::der {

using lp::Sense;

namespace {

std::string tag(const std::string& kind, const std::string& id, const char* sym, std::size_t t) {
    return kind + "[" + id + "]." + sym + "[" + std::to_string(t) + "]";
}

double reactiveHeadroom(double rating, double active) {
    return rating > active ? std::sqrt(rating * rating - active * active) : 0.0;
}

}  // namespace

DgHandles emitDg(LinearProgram& program, const DistributedGenerator& dg,
                 const scenario::Scenario& scenario, const market::MarketHorizon& horizon) {
    const auto& cf = scenario.series.capacityFactor.at(static_cast<std::size_t>(dg.profile));
    const double qMax = reactiveHeadroom(dg.inverterRating, dg.nominalPower);
    DgHandles h;
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        const int p = program.addVariable(0.0, dg.nominalPower * cf.at(t), tag("dg", dg.id, "p", t)).index;
        h.p.push_back(p);
        h.q.push_back(program.addVariable(-qMax, qMax, tag("dg", dg.id, "q", t)).index);
        h.cost.add(p, dg.marginalCost * horizon.stepHours);
    }
    return h;
}

HpHandles emitHp(LinearProgram& program, const HeatPump& hp, const scenario::Scenario& scenario,
                 const market::MarketHorizon& horizon) {
    const auto& amb = scenario.series.ambientTemp;
    const double dt = horizon.stepHours;
    const double leak = dt / (hp.thermalResistance * hp.thermalCapacitance);
    const double gain = dt * hp.cop / hp.thermalCapacitance;
    HpHandles h;
    h.temp.push_back(program.addVariable(hp.initialTemp, hp.initialTemp, tag("hp", hp.id, "T", 0)).index);
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        h.p.push_back(program.addVariable(0.0, hp.maxElecPower, tag("hp", hp.id, "p", t)).index);
        const bool last = t + 1 == horizon.stepCount;
        const double lo = last ? hp.initialTemp : hp.comfortMin;
        const double hi = last ? hp.initialTemp : hp.comfortMax;
        h.temp.push_back(program.addVariable(lo, hi, tag("hp", hp.id, "T", t + 1)).index);
        // T[t+1] = (1 - leak) T[t] + gain P[t] + leak Tamb[t]
        program.addConstraint({{h.temp[t + 1], 1.0}, {h.temp[t], -(1.0 - leak)}, {h.p[t], -gain}},
                              Sense::Equal, leak * amb.at(t), tag("hp", hp.id, "dyn", t));
    }
    return h;
}

EvHandles emitEv(LinearProgram& program, const EvChargingEvent& ev,
                 const scenario::Scenario& scenario, const market::MarketHorizon& horizon) {
    if (ev.arrival < 0 || ev.departure <= ev.arrival ||
        static_cast<std::size_t>(ev.departure) > horizon.stepCount) {
        throw std::invalid_argument("EV event '" + ev.id + "' window outside the horizon");
    }
    const auto& avail = scenario.series.evAvailability;
    const double dt = horizon.stepHours;
    EvHandles h;
    h.firstStep = ev.arrival;
    h.soc.push_back(program.addVariable(ev.arrivalSoc, ev.arrivalSoc, tag("ev", ev.id, "soc", 0)).index);
    std::vector<lp::Term> net;
    for (int t = ev.arrival; t < ev.departure; ++t) {
        const auto k = static_cast<std::size_t>(t - ev.arrival);
        const double a = avail.at(static_cast<std::size_t>(t));
        h.charge.push_back(program.addVariable(0.0, ev.maxChargePower * a, tag("ev", ev.id, "pch", k)).index);
        h.discharge.push_back(
            program.addVariable(0.0, ev.maxDischargePower * a, tag("ev", ev.id, "pdis", k)).index);
        h.soc.push_back(program.addVariable(0.0, ev.batteryCapacity, tag("ev", ev.id, "soc", k + 1)).index);
        program.addConstraint({{h.soc[k + 1], 1.0},
                               {h.soc[k], -1.0},
                               {h.charge[k], -ev.chargeEff * dt},
                               {h.discharge[k], dt / ev.dischargeEff}},
                              Sense::Equal, 0.0, tag("ev", ev.id, "soc_dyn", k));
        net.push_back({h.charge[k], 1.0});
        net.push_back({h.discharge[k], -1.0});
        h.cost.add(h.discharge[k], ev.dischargeCompensation * dt);
    }
    if (ev.minAvgChargeRate > 0.0) {
        const double steps = ev.departure - ev.arrival;
        program.addConstraint(std::move(net), Sense::GreaterEqual, ev.minAvgChargeRate * steps,
                              "ev[" + ev.id + "].min_rate");
    }
    return h;
}

BessHandles emitBess(LinearProgram& program, const Bess& bess, const scenario::Scenario&,
                     const market::MarketHorizon& horizon) {
    const double dt = horizon.stepHours;
    const double qMax = reactiveHeadroom(bess.inverterRating, bess.maxPower);
    BessHandles h;
    h.soc.push_back(program.addVariable(bess.initialSoc, bess.initialSoc, tag("bess", bess.id, "soc", 0)).index);
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        h.charge.push_back(program.addVariable(0.0, bess.maxPower, tag("bess", bess.id, "pch", t)).index);
        h.discharge.push_back(program.addVariable(0.0, bess.maxPower, tag("bess", bess.id, "pdis", t)).index);
        h.q.push_back(program.addVariable(-qMax, qMax, tag("bess", bess.id, "q", t)).index);
        const bool last = t + 1 == horizon.stepCount;
        const double lo = last ? bess.initialSoc : 0.0;
        const double hi = last ? bess.initialSoc : bess.energyCapacity;
        h.soc.push_back(program.addVariable(lo, hi, tag("bess", bess.id, "soc", t + 1)).index);
        program.addConstraint({{h.soc[t + 1], 1.0},
                               {h.soc[t], -1.0},
                               {h.charge[t], -bess.chargeEff * dt},
                               {h.discharge[t], dt / bess.dischargeEff}},
                              Sense::Equal, 0.0, tag("bess", bess.id, "soc_dyn", t));
        h.cost.add(h.charge[t], bess.cycleCost * dt);
        h.cost.add(h.discharge[t], bess.cycleCost * dt);
    }
    return h;
}

ParkHandles emitPark(LinearProgram& program, const DerPark& park,
                     const scenario::Scenario& scenario, const market::MarketHorizon& horizon) {
    ParkHandles h;
    for (const auto& d : park.generators) h.generators.push_back(emitDg(program, d, scenario, horizon));
    for (const auto& d : park.heatPumps) h.heatPumps.push_back(emitHp(program, d, scenario, horizon));
    for (const auto& d : park.evEvents) h.evEvents.push_back(emitEv(program, d, scenario, horizon));
    for (const auto& d : park.batteries) h.batteries.push_back(emitBess(program, d, scenario, horizon));
    return h;
}

LinearExpr parkOperatingCost(const ParkHandles& handles) {
    LinearExpr total;
    for (const auto& h : handles.generators) total.add(h.cost);
    for (const auto& h : handles.evEvents) total.add(h.cost);
    for (const auto& h : handles.batteries) total.add(h.cost);
    return total;
}

NodalDevicePower nodalDevicePower(const DerPark& park, const ParkHandles& handles,
                                  std::size_t nodeCount, std::size_t stepCount) {
    NodalDevicePower out;
    out.active.assign(nodeCount, std::vector<LinearExpr>(stepCount));
    out.reactive.assign(nodeCount, std::vector<LinearExpr>(stepCount));
    auto node = [&](int n) { return static_cast<std::size_t>(n); };
    for (std::size_t d = 0; d < park.generators.size(); ++d) {
        const auto n = node(park.generators[d].node);
        for (std::size_t t = 0; t < stepCount; ++t) {
            out.active[n][t].add(handles.generators[d].p[t], 1.0);
            out.reactive[n][t].add(handles.generators[d].q[t], 1.0);
        }
    }
    for (std::size_t d = 0; d < park.heatPumps.size(); ++d) {
        const auto n = node(park.heatPumps[d].node);
        for (std::size_t t = 0; t < stepCount; ++t) out.active[n][t].add(handles.heatPumps[d].p[t], -1.0);
    }
    for (std::size_t d = 0; d < park.evEvents.size(); ++d) {
        const auto n = node(park.evEvents[d].node);
        const auto& h = handles.evEvents[d];
        for (std::size_t k = 0; k < h.charge.size(); ++k) {
            const auto t = static_cast<std::size_t>(h.firstStep) + k;
            out.active[n][t].add(h.charge[k], -1.0);
            out.active[n][t].add(h.discharge[k], 1.0);
        }
    }
    for (std::size_t d = 0; d < park.batteries.size(); ++d) {
        const auto n = node(park.batteries[d].node);
        const auto& h = handles.batteries[d];
        for (std::size_t t = 0; t < stepCount; ++t) {
            out.active[n][t].add(h.charge[t], -1.0);
            out.active[n][t].add(h.discharge[t], 1.0);
            out.reactive[n][t].add(h.q[t], 1.0);
        }
    }
    return out;
}

}  // namespace vpp::der
