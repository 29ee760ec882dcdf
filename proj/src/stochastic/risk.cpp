#include "vpp/stochastic/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vpp::stochastic {

RiskMeasure RiskMeasure::cvar(double alpha) {
    RiskMeasure r{RiskKind::Cvar, alpha};
    r.validate();
    return r;
}

void RiskMeasure::validate() const {
    if (kind == RiskKind::Cvar && !(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("CVaR alpha must lie in (0, 1)");
    }
}

namespace {

void checkDistribution(std::span<const double> costs, std::span<const double> probs) {
    if (costs.empty()) throw std::invalid_argument("empty cost sample");
    if (costs.size() != probs.size()) throw std::invalid_argument("costs and probabilities differ in length");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to one");
}

}  // namespace

double cvarOfSamples(std::span<const double> costs, std::span<const double> probs, double alpha) {
    checkDistribution(costs, probs);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("CVaR alpha must lie in (0, 1)");
    std::vector<std::size_t> idx(costs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });
    const double tail = 1.0 - alpha;
    double remaining = tail;
    double sum = 0.0;
    for (std::size_t i : idx) {
        if (remaining <= 0.0) break;
        const double take = std::min(probs[i], remaining);
        sum += take * costs[i];
        remaining -= take;
    }
    // rounding in the probabilities can leave a sliver; it belongs to the lowest taken atom
    if (remaining > 0.0) sum += remaining * costs[idx.back()];
    return sum / tail;
}

double expectationOfSamples(std::span<const double> costs, std::span<const double> probs) {
    checkDistribution(costs, probs);
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) sum += probs[i] * costs[i];
    return sum;
}

double riskOfSamples(const RiskMeasure& risk, std::span<const double> costs, std::span<const double> probs) {
    return risk.kind == RiskKind::Cvar ? cvarOfSamples(costs, probs, risk.alpha)
                                       : expectationOfSamples(costs, probs);
}

}  // namespace vpp::stochastic
