#pragma once

#include <span>
#include <vector>

#include "vpp/lp/linear_program.hpp"
#include "vpp/market/horizon.hpp"

namespace vpp::market {

using lp::LinearExpr;
using lp::LinearProgram;

struct MarketConfig {
    double prequalifiedPower = 0.0;     // kW
    std::vector<double> tariffSchedule; // currency/MWh per step
    double damCap = 0.0;                // kW, |P^DAM| bound
};

/// Here-and-now bids shared by all scenarios (kW).
struct FirstStageHandles {
    std::vector<int> dam;    // [step], export positive
    std::vector<int> rcmUp;  // [window]
    std::vector<int> rcmDn;  // [window]

    [[nodiscard]] std::vector<int> all() const;
};

/// Per-scenario market positions (kW).
struct SecondStageHandles {
    std::vector<int> ramUp;
    std::vector<int> ramDn;
    std::vector<int> imbShort;
    std::vector<int> imbLong;
    std::vector<int> vpp;  // delivered power, export positive
};

FirstStageHandles declareFirstStage(LinearProgram& program, const MarketHorizon& horizon,
                                    const MarketConfig& config);
SecondStageHandles declareSecondStage(LinearProgram& program, const MarketHorizon& horizon,
                                      const MarketConfig& config);

/// Revenue builders return currency. Energy terms carry stepHours / 1000,
/// capacity terms carry 1 / 1000 per window. Length mismatches throw
/// std::invalid_argument.
LinearExpr revenueDam(std::span<const double> prices, const std::vector<int>& bids, double stepHours);
LinearExpr revenueRcm(std::span<const double> upPrices, std::span<const double> dnPrices,
                      const std::vector<int>& upBids, const std::vector<int>& dnBids);
LinearExpr revenueRam(std::span<const double> upPrices, std::span<const double> dnPrices,
                      const std::vector<int>& up, const std::vector<int>& dn, double stepHours);

/// Activation cap by prequalified power and activation floor by the
/// capacity booked for the step's window.
void emitMarketConstraints(LinearProgram& program, const MarketHorizon& horizon,
                           const MarketConfig& config, const FirstStageHandles& first,
                           const SecondStageHandles& second);

/// Grid charges on positive withdrawals [bus][step].
LinearExpr tariffCost(const std::vector<std::vector<int>>& withdrawals,
                      std::span<const double> schedule, double stepHours);

LinearExpr imbalanceCost(const std::vector<int>& shortQty, const std::vector<int>& longQty,
                         std::span<const double> shortPrice, std::span<const double> longPrice,
                         double stepHours);

/// vpp = dam + ramUp - ramDn - short + long, and vpp = -pcc.
void emitPositionBalance(LinearProgram& program, const FirstStageHandles& first,
                         const SecondStageHandles& second, const std::vector<int>& pcc);

struct CostComponents {
    LinearExpr revenueDam;
    LinearExpr revenueRcm;
    LinearExpr revenueRam;
    LinearExpr operations;
    LinearExpr tariff;
    LinearExpr imbalance;
};

LinearExpr totalCost(const CostComponents& c);

struct CostBreakdown {
    double revenueDam = 0.0;
    double revenueRcm = 0.0;
    double revenueRam = 0.0;
    double operations = 0.0;
    double tariff = 0.0;
    double imbalance = 0.0;
    double total = 0.0;

    static CostBreakdown evaluate(const CostComponents& c, std::span<const double> x);
    /// Applies the sign convention to already evaluated components.
    static CostBreakdown fromComponents(double rDam, double rRcm, double rRam, double ops,
                                        double tariff, double imbalance);
};

/// 24 hourly values repeated onto the step grid.
std::vector<double> expandHourly(std::span<const double> hourly, const MarketHorizon& horizon);

/// Tariff times (1 - swing) on steps whose start hour lies in
/// [lowStart, lowEnd) and (1 + swing) in [highStart, highEnd).
std::vector<double> swingTariff(std::span<const double> perStep, const MarketHorizon& horizon,
                                double swing, double lowStart, double lowEnd, double highStart,
                                double highEnd);

}  // namespace vpp::market
