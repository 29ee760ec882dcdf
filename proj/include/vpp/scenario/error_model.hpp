#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace vpp::scenario {

enum class ErrorKind { Normal, Uniform };

/// The ten lumped forecast errors. The enum order is also the LHS column
/// order.
enum class ErrorType {
    Load,
    Generation,
    Temperature,
    EvAvailability,
    DayAhead,
    ReserveCapacity,
    ActivationAfrrUp,
    ActivationAfrrDown,
    ActivationMfrrUp,
    ActivationMfrrDown,
};

inline constexpr std::size_t kErrorTypeCount = 10;

inline constexpr std::array<ErrorType, kErrorTypeCount> kAllErrorTypes{
    ErrorType::Load,           ErrorType::Generation,       ErrorType::Temperature,
    ErrorType::EvAvailability, ErrorType::DayAhead,         ErrorType::ReserveCapacity,
    ErrorType::ActivationAfrrUp, ErrorType::ActivationAfrrDown, ErrorType::ActivationMfrrUp,
    ErrorType::ActivationMfrrDown,
};

std::string_view errorTypeName(ErrorType type);
std::optional<ErrorType> errorTypeFromName(std::string_view name);

/// A Uniform spec keeps mean/stdDev; its support is mean +- stdDev*sqrt(3).
/// `relative` errors multiply the target series by (1 + e), absolute ones
/// are added.
struct ErrorSpec {
    ErrorKind kind = ErrorKind::Normal;
    double mean = 0.0;
    double stdDev = 0.0;
    bool relative = false;
};

using ErrorTable = std::map<ErrorType, ErrorSpec>;

/// Forecast-error table used by the case study: relative rows are the
/// percent-valued ones (load, generation, EV), all price rows and the
/// temperature row are absolute.
ErrorTable defaultErrorTable();

/// Throws std::invalid_argument when a type is missing or stdDev < 0.
void validateErrorTable(const ErrorTable& table);

/// Standard normal quantile, |error| < 1e-9 over (0, 1). Arguments are
/// clipped to [1e-15, 1 - 1e-15].
double normalQuantile(double p);

double inverseTransform(double u, const ErrorSpec& spec);

}  // namespace vpp::scenario
