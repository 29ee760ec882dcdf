#include "vpp/stochastic/model.hpp"

#include <string>

namespace vpp::stochastic {

void VppModel::finalize() {
    topology = grid::validateRadial(network);
    park.validate(network.busCount());
    horizon.validate();
    if (market.tariffSchedule.size() != horizon.stepCount) {
        throw std::invalid_argument("tariff schedule length differs from the horizon");
    }
    if (market.prequalifiedPower < 0.0) throw std::invalid_argument("negative prequalified power");
    if (market.damCap < 0.0) throw std::invalid_argument("negative day-ahead bid cap");
    if (flowSegments < 4) throw std::invalid_argument("flow polygon needs at least 4 segments");
}

void VppModel::checkScenario(const scenario::Scenario& s) const {
    const auto& f = s.series;
    f.validate();
    if (f.stepCount() != horizon.stepCount) throw std::invalid_argument("scenario step count differs from model");
    if (f.windowCount() != horizon.windowCount()) {
        throw std::invalid_argument("scenario window count differs from model");
    }
    if (f.capacityFactor.size() < park.profileCount()) {
        throw std::invalid_argument("scenario lacks capacity-factor profiles");
    }
    if (f.loadActive.size() > network.busCount()) throw std::invalid_argument("scenario has loads on unknown buses");
    if (s.imbalanceShort.size() != horizon.stepCount || s.imbalanceLong.size() != horizon.stepCount) {
        throw std::invalid_argument("imbalance price length differs from model");
    }
}

ScenarioBlock emitScenarioBlock(lp::LinearProgram& program, const VppModel& model,
                                const scenario::Scenario& scenario,
                                const market::FirstStageHandles& first) {
    const auto& h = model.horizon;
    const auto& f = scenario.series;
    ScenarioBlock b;
    b.park = der::emitPark(program, model.park, scenario, h);
    const auto devices = der::nodalDevicePower(model.park, b.park, model.network.busCount(), h.stepCount);
    b.grid = grid::emitDistflow(program, model.network, model.topology, scenario, devices, h.stepCount);
    grid::emitFlowLimits(program, model.network, b.grid, model.flowSegments);
    b.market = market::declareSecondStage(program, h, model.market);
    market::emitMarketConstraints(program, h, model.market, first, b.market);
    market::emitPositionBalance(program, first, b.market, b.grid.pcc);

    b.costs.revenueDam = market::revenueDam(f.dayAheadPrice, first.dam, h.stepHours);
    b.costs.revenueRcm = market::revenueRcm(f.rcmUpPrice, f.rcmDnPrice, first.rcmUp, first.rcmDn);
    b.costs.revenueRam = market::revenueRam(f.ramUpPrice, f.ramDnPrice, b.market.ramUp, b.market.ramDn, h.stepHours);
    b.costs.operations = der::parkOperatingCost(b.park);
    b.costs.tariff = market::tariffCost(b.grid.withdrawal, model.market.tariffSchedule, h.stepHours);
    b.costs.imbalance = market::imbalanceCost(b.market.imbShort, b.market.imbLong, scenario.imbalanceShort,
                                              scenario.imbalanceLong, h.stepHours);
    b.total = market::totalCost(b.costs);
    return b;
}

std::vector<double> FirstStageDecision::flatten() const {
    std::vector<double> x(dam);
    x.insert(x.end(), rcmUp.begin(), rcmUp.end());
    x.insert(x.end(), rcmDn.begin(), rcmDn.end());
    return x;
}

FirstStageDecision FirstStageDecision::unflatten(const std::vector<double>& x, std::size_t steps,
                                                 std::size_t windows) {
    if (x.size() != steps + 2 * windows) throw std::invalid_argument("first-stage vector has the wrong size");
    FirstStageDecision d;
    const auto at = [&x](std::size_t i) { return x.begin() + static_cast<std::ptrdiff_t>(i); };
    d.dam.assign(at(0), at(steps));
    d.rcmUp.assign(at(steps), at(steps + windows));
    d.rcmDn.assign(at(steps + windows), at(steps + 2 * windows));
    return d;
}

FirstStageDecision readFirstStage(const market::FirstStageHandles& first, const std::vector<double>& primal) {
    FirstStageDecision d;
    for (int j : first.dam) d.dam.push_back(primal[static_cast<std::size_t>(j)]);
    for (int j : first.rcmUp) d.rcmUp.push_back(primal[static_cast<std::size_t>(j)]);
    for (int j : first.rcmDn) d.rcmDn.push_back(primal[static_cast<std::size_t>(j)]);
    return d;
}

}  // namespace vpp::stochastic
