#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpp/benders/benders.hpp"
#include "vpp/market/horizon.hpp"
#include "vpp/scenario/error_model.hpp"
#include "vpp/scenario/forecast.hpp"
#include "vpp/stochastic/model.hpp"
#include "vpp/stochastic/risk.hpp"

namespace vpp::app {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SolveMethod { Benders, Extensive };

SolveMethod parseMethod(const std::string& name);
const char* methodName(SolveMethod method);
/// "neutral" or "cvar".
stochastic::RiskKind parseRisk(const std::string& name);

struct SweepSettings {
    std::vector<double> levels;
    double lowStart = 10.0, lowEnd = 14.0;    // clock hours, end exclusive
    double highStart = 17.0, highEnd = 21.0;
    SolveMethod method = SolveMethod::Extensive;
    std::size_t levelWorkers = 1;  // swing levels solved concurrently
};

/// Parsed configuration document. Relative paths are resolved against the
/// directory holding the config file.
struct RunConfig {
    std::filesystem::path file;
    std::filesystem::path networkDir;
    std::filesystem::path derDir;
    std::filesystem::path forecastFile;
    double baseMVA = 1.0;
    double baseKV = 0.4;

    std::size_t steps = 96;
    double stepHours = 0.25;
    double rcmWindowHours = 4.0;
    double startHour = 0.0;

    double prequalifiedPower = 0.0;   // kW
    std::vector<double> hourlyTariff; // 24 values, currency/MWh
    std::optional<double> damCap;     // kW; derived from the park and loads when absent
    int flowSegments = 8;

    stochastic::RiskMeasure risk;
    std::size_t scenarioCount = 10;
    std::uint64_t seed = 42;
    std::filesystem::path scenarioDir;
    scenario::ErrorTable errors;

    benders::BendersOptions benders;
    SolveMethod method = SolveMethod::Benders;
    std::size_t extensiveMaxVariables = 400000;
    std::filesystem::path outputDir;

    SweepSettings sweep;

    /// FNV-1a of the canonical config document and every referenced input
    /// file. `instanceHash` leaves out the solver, risk and sweep sections,
    /// so scenario sets survive changes to those.
    std::string configHash;
    std::string instanceHash;
};

/// Throws ConfigError with the offending key on schema or range errors and
/// when a referenced file is missing.
RunConfig loadConfig(const std::filesystem::path& file);

/// "a:b:step" or a comma list; every value must lie in [0, 1].
std::vector<double> parseLevels(const std::string& text);

struct LoadedInstance {
    stochastic::VppModel model;
    scenario::BaseForecast forecast;
};

LoadedInstance loadInstance(const RunConfig& config);

/// Installed DER power plus 1.25 times the peak total forecast load.
double defaultDamCap(const der::DerPark& park, const scenario::Forecast& forecast);

}  // namespace vpp::app
