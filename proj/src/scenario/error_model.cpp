#include "vpp/scenario/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vpp::scenario {

namespace {

constexpr std::array<std::string_view, kErrorTypeCount> kNames{
    "load",         "generation",   "temperature",  "ev_availability", "day_ahead",
    "rcm_afrr",     "ram_afrr_up",  "ram_afrr_dn",  "ram_mfrr_up",     "ram_mfrr_dn",
};

}  // namespace

std::string_view errorTypeName(ErrorType type) { return kNames[static_cast<std::size_t>(type)]; }

std::optional<ErrorType> errorTypeFromName(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return kAllErrorTypes[i];
    return std::nullopt;
}

ErrorTable defaultErrorTable() {
    return {
        {ErrorType::Load, {ErrorKind::Normal, 0.0, 0.1075, true}},
        {ErrorType::Generation, {ErrorKind::Normal, 0.0, 0.0815, true}},
        {ErrorType::Temperature, {ErrorKind::Normal, 0.0, 1.5, false}},
        {ErrorType::EvAvailability, {ErrorKind::Uniform, 0.10, 0.0577, true}},
        {ErrorType::DayAhead, {ErrorKind::Normal, 0.0, 4.28, false}},
        {ErrorType::ReserveCapacity, {ErrorKind::Normal, 0.0, 3.30, false}},
        {ErrorType::ActivationAfrrUp, {ErrorKind::Normal, 0.0, 32.08, false}},
        {ErrorType::ActivationAfrrDown, {ErrorKind::Normal, 0.0, 21.25, false}},
        {ErrorType::ActivationMfrrUp, {ErrorKind::Normal, 0.0, 63.6, false}},
        {ErrorType::ActivationMfrrDown, {ErrorKind::Normal, 0.0, 42.91, false}},
    };
}

void validateErrorTable(const ErrorTable& table) {
    for (ErrorType t : kAllErrorTypes) {
        const auto it = table.find(t);
        if (it == table.end()) {
            throw std::invalid_argument("error table is missing '" + std::string(errorTypeName(t)) + "'");
        }
        if (!(it->second.stdDev >= 0.0) || !std::isfinite(it->second.mean)) {
            throw std::invalid_argument("invalid spec for '" + std::string(errorTypeName(t)) + "'");
        }
    }
}

double normalQuantile(double p) {
    // Acklam's rational approximation followed by one Halley step.
    constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                            1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                            6.680131188771972e+01,  -1.328068155288572e+01};
    constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                            -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                            3.754408661907416e+00};
    p = std::clamp(p, 1e-15, 1.0 - 1e-15);
    if (p > 0.5) return -normalQuantile(1.0 - p);
    constexpr double lowCut = 0.02425;
    double x;
    if (p < lowCut) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double inverseTransform(double u, const ErrorSpec& spec) {
    switch (spec.kind) {
        case ErrorKind::Normal:
            return spec.mean + spec.stdDev * normalQuantile(u);
        case ErrorKind::Uniform:
            return spec.mean + spec.stdDev * std::numbers::sqrt3 * (2.0 * u - 1.0);
    }
    return spec.mean;
}

}  // namespace vpp::scenario
