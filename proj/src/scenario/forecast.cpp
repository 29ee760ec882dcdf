#include "vpp/scenario/forecast.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vpp/scenario/lhs.hpp"

namespace vpp::scenario {

namespace {

void requireLength(const std::vector<double>& v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw std::invalid_argument(std::string("forecast series '") + what + "' has length " +
                                    std::to_string(v.size()) + ", expected " + std::to_string(n));
    }
}

double draw(const ErrorDraw& d, ErrorType t) { return d[static_cast<std::size_t>(t)]; }

void perturb(std::vector<double>& series, double error, bool relative) {
    for (double& v : series) v = relative ? v * (1.0 + error) : v + error;
}

}  // namespace

void Forecast::validate() const {
    const std::size_t n = stepCount();
    if (n == 0) throw std::invalid_argument("forecast has no time steps");
    requireLength(ramUpPrice, n, "ram_up_price");
    requireLength(ramDnPrice, n, "ram_dn_price");
    requireLength(mfrrUpPrice, n, "mfrr_up_price");
    requireLength(mfrrDnPrice, n, "mfrr_dn_price");
    requireLength(ambientTemp, n, "ambient_temp");
    requireLength(evAvailability, n, "ev_availability");
    if (rcmUpPrice.empty()) throw std::invalid_argument("forecast has no reserve windows");
    requireLength(rcmDnPrice, rcmUpPrice.size(), "rcm_dn_price");
    for (const auto& cf : capacityFactor) {
        requireLength(cf, n, "capacity_factor");
        for (double v : cf)
            if (v < 0.0 || v > 1.0) throw std::invalid_argument("capacity factor outside [0, 1]");
    }
    if (loadActive.size() != loadReactive.size())
        throw std::invalid_argument("active/reactive load node counts differ");
    for (std::size_t i = 0; i < loadActive.size(); ++i) {
        requireLength(loadActive[i], n, "load_active");
        requireLength(loadReactive[i], n, "load_reactive");
    }
}

std::pair<std::vector<double>, std::vector<double>> imbalancePrices(const Forecast& draft) {
    const std::size_t n = draft.dayAheadPrice.size();
    requireLength(draft.mfrrUpPrice, n, "mfrr_up_price");
    requireLength(draft.mfrrDnPrice, n, "mfrr_dn_price");
    std::vector<double> shortPrice(n), longPrice(n);
    for (std::size_t t = 0; t < n; ++t) {
        shortPrice[t] = std::max(draft.dayAheadPrice[t], draft.mfrrUpPrice[t]);
        longPrice[t] = std::min(draft.dayAheadPrice[t], draft.mfrrDnPrice[t]);
    }
    return {std::move(shortPrice), std::move(longPrice)};
}

Scenario applyErrors(const BaseForecast& base, const ErrorTable& table, const ErrorDraw& d,
                     double probability) {
    validateErrorTable(table);
    if (!(probability > 0.0)) throw std::invalid_argument("scenario probability must be positive");
    const auto rel = [&](ErrorType t) { return table.at(t).relative; };

    Scenario s;
    s.probability = probability;
    Forecast& f = s.series;
    f = base;

    for (auto& node : f.loadActive) perturb(node, draw(d, ErrorType::Load), rel(ErrorType::Load));
    for (auto& node : f.loadReactive) perturb(node, draw(d, ErrorType::Load), rel(ErrorType::Load));
    for (auto& cf : f.capacityFactor) {
        perturb(cf, draw(d, ErrorType::Generation), rel(ErrorType::Generation));
        for (double& v : cf) v = std::clamp(v, 0.0, 1.0);
    }
    perturb(f.ambientTemp, draw(d, ErrorType::Temperature), rel(ErrorType::Temperature));
    perturb(f.evAvailability, draw(d, ErrorType::EvAvailability), rel(ErrorType::EvAvailability));
    for (double& v : f.evAvailability) v = std::clamp(v, 0.0, 1.0);

    perturb(f.dayAheadPrice, draw(d, ErrorType::DayAhead), rel(ErrorType::DayAhead));
    perturb(f.rcmUpPrice, draw(d, ErrorType::ReserveCapacity), rel(ErrorType::ReserveCapacity));
    perturb(f.rcmDnPrice, draw(d, ErrorType::ReserveCapacity), rel(ErrorType::ReserveCapacity));
    for (double& v : f.rcmUpPrice) v = std::max(v, 0.0);
    for (double& v : f.rcmDnPrice) v = std::max(v, 0.0);
    perturb(f.ramUpPrice, draw(d, ErrorType::ActivationAfrrUp), rel(ErrorType::ActivationAfrrUp));
    perturb(f.ramDnPrice, draw(d, ErrorType::ActivationAfrrDown), rel(ErrorType::ActivationAfrrDown));
    perturb(f.mfrrUpPrice, draw(d, ErrorType::ActivationMfrrUp), rel(ErrorType::ActivationMfrrUp));
    perturb(f.mfrrDnPrice, draw(d, ErrorType::ActivationMfrrDown), rel(ErrorType::ActivationMfrrDown));

    auto [shortPrice, longPrice] = imbalancePrices(f);
    s.imbalanceShort = std::move(shortPrice);
    s.imbalanceLong = std::move(longPrice);
    return s;
}

std::vector<ErrorDraw> sampleErrorDraws(const ErrorTable& table, std::size_t n, std::uint64_t seed) {
    validateErrorTable(table);
    if (n == 0) throw std::invalid_argument("scenario count must be positive");
    const SampleMatrix u = lhsSample(n, kErrorTypeCount, seed);
    std::vector<ErrorDraw> draws(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t k = 0; k < kErrorTypeCount; ++k)
            draws[s][k] = inverseTransform(u.at(s, k), table.at(kAllErrorTypes[k]));
    return draws;
}

ScenarioSet buildScenarios(const BaseForecast& base, const ErrorTable& table, std::size_t n,
                           std::uint64_t seed) {
    base.validate();
    const auto draws = sampleErrorDraws(table, n, seed);
    ScenarioSet set;
    set.seed = seed;
    set.errors = table;
    set.scenarios.reserve(n);
    const double p = 1.0 / static_cast<double>(n);
    for (const auto& d : draws) set.scenarios.push_back(applyErrors(base, table, d, p));
    return set;
}

}  // namespace vpp::scenario
