#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "vpp/scenario/forecast.hpp"

namespace vpp::scenario {

/// Scenario directory layout:
///   manifest.json          seed, count, dimensions, error table, per-file
///                          probability, content hash
///   scenario_0000.csv ...  one row per time step
/// CSV columns (units): step, window, dam_price [cur/MWh], rcm_up_price and
/// rcm_dn_price [cur/MW per window, repeated on each step of the window],
/// ram_up_price, ram_dn_price, mfrr_up_price, mfrr_dn_price,
/// imbalance_short_price, imbalance_long_price [cur/MWh], ambient_temp [degC],
/// ev_availability [-], cf_<g> [-], load_p_<i> [kW], load_q_<i> [kvar].
/// Numbers are written with 17 significant digits, so loads are lossless.
struct ScenarioFiles {
    std::string contentHash;
    std::size_t count = 0;
};

/// `windowOf[t]` maps steps to reserve windows for the CSV window column.
/// `tags` are copied into the manifest verbatim (e.g. the config hash).
ScenarioFiles saveScenarioSet(const ScenarioSet& set, const std::vector<int>& windowOf,
                              const std::filesystem::path& dir,
                              const std::map<std::string, std::string>& tags = {});

ScenarioSet loadScenarioSet(const std::filesystem::path& dir);

/// Hash recorded in the manifest of `dir`; throws if the directory has none.
std::string manifestHash(const std::filesystem::path& dir);
std::map<std::string, std::string> manifestTags(const std::filesystem::path& dir);

/// Point forecast in the scenario CSV layout without the imbalance columns.
/// Generator profiles and nodes are counted from the cf_/load_p_ columns.
void saveForecast(const Forecast& forecast, const std::vector<int>& windowOf, const std::filesystem::path& file);
Forecast loadForecast(const std::filesystem::path& file);

}  // namespace vpp::scenario
