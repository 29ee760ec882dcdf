#include "vpp/market/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vpp::market {

using lp::kInf;
using lp::Sense;

namespace {

constexpr double kPerMega = 1.0 / 1000.0;

void sameLength(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

std::string tag(const char* sym, std::size_t t) { return std::string(sym) + "[" + std::to_string(t) + "]"; }

}  // namespace

std::vector<int> FirstStageHandles::all() const {
    std::vector<int> v(dam);
    v.insert(v.end(), rcmUp.begin(), rcmUp.end());
    v.insert(v.end(), rcmDn.begin(), rcmDn.end());
    return v;
}

FirstStageHandles declareFirstStage(LinearProgram& program, const MarketHorizon& horizon,
                                    const MarketConfig& config) {
    FirstStageHandles h;
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        h.dam.push_back(program.addVariable(-config.damCap, config.damCap, tag("dam", t)).index);
    }
    for (std::size_t w = 0; w < horizon.windowCount(); ++w) {
        h.rcmUp.push_back(program.addVariable(0.0, config.prequalifiedPower, tag("rcm_up", w)).index);
        h.rcmDn.push_back(program.addVariable(0.0, config.prequalifiedPower, tag("rcm_dn", w)).index);
    }
    return h;
}

SecondStageHandles declareSecondStage(LinearProgram& program, const MarketHorizon& horizon,
                                      const MarketConfig& config) {
    SecondStageHandles h;
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        h.ramUp.push_back(program.addVariable(0.0, config.prequalifiedPower, tag("ram_up", t)).index);
        h.ramDn.push_back(program.addVariable(0.0, config.prequalifiedPower, tag("ram_dn", t)).index);
        h.imbShort.push_back(program.addVariable(0.0, kInf, tag("imb_short", t)).index);
        h.imbLong.push_back(program.addVariable(0.0, kInf, tag("imb_long", t)).index);
        h.vpp.push_back(program.addVariable(-kInf, kInf, tag("vpp", t)).index);
    }
    return h;
}

LinearExpr revenueDam(std::span<const double> prices, const std::vector<int>& bids, double stepHours) {
    sameLength(prices.size(), bids.size(), "revenueDam");
    LinearExpr e;
    for (std::size_t t = 0; t < bids.size(); ++t) e.add(bids[t], prices[t] * stepHours * kPerMega);
    return e;
}

LinearExpr revenueRcm(std::span<const double> upPrices, std::span<const double> dnPrices,
                      const std::vector<int>& upBids, const std::vector<int>& dnBids) {
    sameLength(upPrices.size(), upBids.size(), "revenueRcm");
    sameLength(dnPrices.size(), dnBids.size(), "revenueRcm");
    LinearExpr e;
    for (std::size_t w = 0; w < upBids.size(); ++w) e.add(upBids[w], upPrices[w] * kPerMega);
    for (std::size_t w = 0; w < dnBids.size(); ++w) e.add(dnBids[w], dnPrices[w] * kPerMega);
    return e;
}

LinearExpr revenueRam(std::span<const double> upPrices, std::span<const double> dnPrices,
                      const std::vector<int>& up, const std::vector<int>& dn, double stepHours) {
    sameLength(upPrices.size(), up.size(), "revenueRam");
    sameLength(dnPrices.size(), dn.size(), "revenueRam");
    LinearExpr e;
    for (std::size_t t = 0; t < up.size(); ++t) e.add(up[t], upPrices[t] * stepHours * kPerMega);
    for (std::size_t t = 0; t < dn.size(); ++t) e.add(dn[t], dnPrices[t] * stepHours * kPerMega);
    return e;
}

void emitMarketConstraints(LinearProgram& program, const MarketHorizon& horizon,
                           const MarketConfig& config, const FirstStageHandles& first,
                           const SecondStageHandles& second) {
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        const auto w = static_cast<std::size_t>(horizon.windowOf[t]);
        // the prequalified cap itself sits on the activation bounds
        program.setBounds(second.ramUp[t], 0.0, config.prequalifiedPower);
        program.setBounds(second.ramDn[t], 0.0, config.prequalifiedPower);
        program.addConstraint({{second.ramUp[t], 1.0}, {first.rcmUp[w], -1.0}}, Sense::GreaterEqual, 0.0,
                              tag("ram_up_floor", t));
        program.addConstraint({{second.ramDn[t], 1.0}, {first.rcmDn[w], -1.0}}, Sense::GreaterEqual, 0.0,
                              tag("ram_dn_floor", t));
    }
}

LinearExpr tariffCost(const std::vector<std::vector<int>>& withdrawals, std::span<const double> schedule,
                      double stepHours) {
    LinearExpr e;
    for (const auto& node : withdrawals) {
        sameLength(schedule.size(), node.size(), "tariffCost");
        for (std::size_t t = 0; t < node.size(); ++t) e.add(node[t], schedule[t] * stepHours * kPerMega);
    }
    return e;
}

LinearExpr imbalanceCost(const std::vector<int>& shortQty, const std::vector<int>& longQty,
                         std::span<const double> shortPrice, std::span<const double> longPrice,
                         double stepHours) {
    sameLength(shortQty.size(), shortPrice.size(), "imbalanceCost");
    sameLength(longQty.size(), longPrice.size(), "imbalanceCost");
    LinearExpr e;
    for (std::size_t t = 0; t < shortQty.size(); ++t) e.add(shortQty[t], shortPrice[t] * stepHours * kPerMega);
    for (std::size_t t = 0; t < longQty.size(); ++t) e.add(longQty[t], -longPrice[t] * stepHours * kPerMega);
    return e;
}

void emitPositionBalance(LinearProgram& program, const FirstStageHandles& first,
                         const SecondStageHandles& second, const std::vector<int>& pcc) {
    for (std::size_t t = 0; t < second.vpp.size(); ++t) {
        program.addConstraint({{second.vpp[t], 1.0},
                               {first.dam[t], -1.0},
                               {second.ramUp[t], -1.0},
                               {second.ramDn[t], 1.0},
                               {second.imbShort[t], 1.0},
                               {second.imbLong[t], -1.0}},
                              Sense::Equal, 0.0, tag("position", t));
        program.addConstraint({{second.vpp[t], 1.0}, {pcc.at(t), 1.0}}, Sense::Equal, 0.0, tag("pcc_tie", t));
    }
}

LinearExpr totalCost(const CostComponents& c) {
    LinearExpr e;
    e.add(c.revenueDam, -1.0);
    e.add(c.revenueRcm, -1.0);
    e.add(c.revenueRam, -1.0);
    e.add(c.operations);
    e.add(c.tariff);
    e.add(c.imbalance);
    return e;
}

CostBreakdown CostBreakdown::fromComponents(double rDam, double rRcm, double rRam, double ops,
                                            double tariff, double imbalance) {
    CostBreakdown b{rDam, rRcm, rRam, ops, tariff, imbalance, 0.0};
    b.total = -(rDam + rRcm + rRam) + ops + tariff + imbalance;
    return b;
}

CostBreakdown CostBreakdown::evaluate(const CostComponents& c, std::span<const double> x) {
    return fromComponents(c.revenueDam.evaluate(x), c.revenueRcm.evaluate(x), c.revenueRam.evaluate(x),
                          c.operations.evaluate(x), c.tariff.evaluate(x), c.imbalance.evaluate(x));
}

std::vector<double> expandHourly(std::span<const double> hourly, const MarketHorizon& horizon) {
    if (hourly.empty()) throw std::invalid_argument("empty hourly schedule");
    std::vector<double> out(horizon.stepCount);
    for (std::size_t t = 0; t < horizon.stepCount; ++t) {
        const auto hour = static_cast<std::size_t>(std::floor(horizon.clockHour(t) + 1e-9));
        out[t] = hourly[hour % hourly.size()];
    }
    return out;
}

std::vector<double> swingTariff(std::span<const double> perStep, const MarketHorizon& horizon,
                                double swing, double lowStart, double lowEnd, double highStart,
                                double highEnd) {
    if (swing < 0.0 || swing > 1.0) throw std::invalid_argument("swing level outside [0, 1]");
    sameLength(perStep.size(), horizon.stepCount, "swingTariff");
    std::vector<double> out(perStep.begin(), perStep.end());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double hour = horizon.clockHour(t);
        if (hour >= lowStart - 1e-9 && hour < lowEnd - 1e-9) out[t] *= 1.0 - swing;
        if (hour >= highStart - 1e-9 && hour < highEnd - 1e-9) out[t] *= 1.0 + swing;
    }
    return out;
}

}  // namespace vpp::market
