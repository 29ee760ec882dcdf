#include "vpp/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

#include "vpp/der/devices.hpp"
#include "vpp/grid/network.hpp"
#include "vpp/io/csv.hpp"
#include "vpp/market/market.hpp"
#include "vpp/scenario/scenario_io.hpp"

namespace vpp::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void allowKeys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) throw ConfigError("unknown key '" + where + "." + k + "'");
    }
}

template <typename T>
T get(const json& obj, const std::string& where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("'" + where + "." + key + "' has the wrong type");
    }
}

template <typename T>
T require(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + where + "." + key + "'");
    return get<T>(obj, where, key, T{});
}

const json& section(const json& root, const char* name) {
    static const json empty = json::object();
    return root.contains(name) ? root.at(name) : empty;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

std::string fileBytes(const fs::path& p) {
    if (!fs::exists(p)) return {};
    return io::readTextFile(p);
}

/// Referenced inputs in a fixed order, so the hash is stable.
std::string inputBytes(const RunConfig& c) {
    std::string all;
    for (const char* f : {"buses.csv", "branches.csv"}) all += fileBytes(c.networkDir / f);
    for (const char* f : {"generators.csv", "heat_pumps.csv", "ev_events.csv", "batteries.csv"})
        all += fileBytes(c.derDir / f);
    all += fileBytes(c.forecastFile);
    return all;
}

scenario::ErrorTable parseErrors(const json& obj) {
    auto table = scenario::defaultErrorTable();
    if (!obj.is_object()) throw ConfigError("scenarios.errors must be an object");
    for (const auto& [name, spec] : obj.items()) {
        const auto type = scenario::errorTypeFromName(name);
        if (!type) throw ConfigError("unknown error type '" + name + "'");
        const std::string where = "scenarios.errors." + name;
        allowKeys(spec, where, {"distribution", "mean", "std_dev", "relative"});
        auto& e = table[*type];
        const auto dist = get<std::string>(spec, where, "distribution", e.kind == scenario::ErrorKind::Normal ? "normal" : "uniform");
        check(dist == "normal" || dist == "uniform", where + ".distribution must be normal or uniform");
        e.kind = dist == "normal" ? scenario::ErrorKind::Normal : scenario::ErrorKind::Uniform;
        e.mean = get<double>(spec, where, "mean", e.mean);
        e.stdDev = get<double>(spec, where, "std_dev", e.stdDev);
        e.relative = get<bool>(spec, where, "relative", e.relative);
    }
    try {
        scenario::validateErrorTable(table);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return table;
}

std::pair<double, double> window(const json& obj, const char* key, std::pair<double, double> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto v = get<std::vector<double>>(obj, "tariff_sweep", key, {});
    check(v.size() == 2 && v[0] < v[1], std::string("tariff_sweep.") + key + " must be [start, end) hours");
    return {v[0], v[1]};
}

}  // namespace

SolveMethod parseMethod(const std::string& name) {
    if (name == "benders") return SolveMethod::Benders;
    if (name == "extensive") return SolveMethod::Extensive;
    throw ConfigError("method must be benders or extensive, got '" + name + "'");
}

const char* methodName(SolveMethod method) { return method == SolveMethod::Benders ? "benders" : "extensive"; }

stochastic::RiskKind parseRisk(const std::string& name) {
    if (name == "neutral") return stochastic::RiskKind::Expectation;
    if (name == "cvar") return stochastic::RiskKind::Cvar;
    throw ConfigError("risk must be neutral or cvar, got '" + name + "'");
}

std::vector<double> parseLevels(const std::string& text) {
    std::vector<double> out;
    try {
        if (text.find(':') != std::string::npos) {
            const auto a = text.find(':');
            const auto b = text.find(':', a + 1);
            if (b == std::string::npos) throw ConfigError("levels must look like start:end:step");
            const double lo = io::parseDouble(text.substr(0, a));
            const double hi = io::parseDouble(text.substr(a + 1, b - a - 1));
            const double step = io::parseDouble(text.substr(b + 1));
            check(step > 0.0 && hi >= lo, "levels need step > 0 and end >= start");
            const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
            for (long k = 0; k <= n; ++k) out.push_back(std::round((lo + k * step) * 1e12) / 1e12);
        } else {
            std::size_t start = 0;
            while (start <= text.size()) {
                const auto end = std::min(text.find(',', start), text.size());
                out.push_back(io::parseDouble(text.substr(start, end - start)));
                start = end + 1;
            }
        }
    } catch (const io::IoError& e) {
        throw ConfigError(std::string("bad swing levels: ") + e.what());
    }
    check(!out.empty(), "no swing levels given");
    for (double v : out) check(v >= 0.0 && v <= 1.0, "swing levels must lie in [0, 1]");
    return out;
}

RunConfig loadConfig(const fs::path& file) {
    if (!fs::exists(file)) throw ConfigError("config file not found: " + file.string());
    json root;
    try {
        root = json::parse(io::readTextFile(file));
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    allowKeys(root, "config", {"instance", "horizon", "market", "grid", "scenarios", "risk", "solver", "tariff_sweep"});

    RunConfig c;
    c.file = file;
    const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
    const auto resolve = [&base](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    const json& inst = section(root, "instance");
    allowKeys(inst, "instance", {"network_dir", "der_dir", "forecast_file", "base_mva", "base_kv"});
    c.networkDir = resolve(require<std::string>(inst, "instance", "network_dir"));
    c.derDir = resolve(require<std::string>(inst, "instance", "der_dir"));
    c.forecastFile = resolve(require<std::string>(inst, "instance", "forecast_file"));
    c.baseMVA = get<double>(inst, "instance", "base_mva", 1.0);
    c.baseKV = get<double>(inst, "instance", "base_kv", 0.4);
    check(c.baseMVA > 0.0 && c.baseKV > 0.0, "instance bases must be positive");
    for (const auto& p : {c.networkDir / "buses.csv", c.networkDir / "branches.csv", c.forecastFile})
        check(fs::exists(p), "referenced file not found: " + p.string());
    check(fs::is_directory(c.derDir), "DER directory not found: " + c.derDir.string());

    const json& hz = section(root, "horizon");
    allowKeys(hz, "horizon", {"steps", "step_hours", "rcm_window_hours", "start_hour"});
    c.steps = require<std::size_t>(hz, "horizon", "steps");
    c.stepHours = get<double>(hz, "horizon", "step_hours", 0.25);
    c.rcmWindowHours = get<double>(hz, "horizon", "rcm_window_hours", 4.0);
    c.startHour = get<double>(hz, "horizon", "start_hour", 0.0);
    try {
        market::MarketHorizon::uniform(c.steps, c.stepHours, c.rcmWindowHours, c.startHour);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("horizon: ") + e.what());
    }

    const json& mk = section(root, "market");
    allowKeys(mk, "market", {"prequalified_power_kw", "tariff_hourly_per_mwh", "dam_cap_kw"});
    c.prequalifiedPower = get<double>(mk, "market", "prequalified_power_kw", 0.0);
    check(c.prequalifiedPower >= 0.0, "market.prequalified_power_kw must be >= 0");
    c.hourlyTariff = get<std::vector<double>>(mk, "market", "tariff_hourly_per_mwh", std::vector<double>(24, 0.0));
    check(c.hourlyTariff.size() == 24, "market.tariff_hourly_per_mwh needs 24 values");
    if (mk.contains("dam_cap_kw")) {
        c.damCap = get<double>(mk, "market", "dam_cap_kw", 0.0);
        check(*c.damCap >= 0.0, "market.dam_cap_kw must be >= 0");
    }

    const json& gr = section(root, "grid");
    allowKeys(gr, "grid", {"flow_segments"});
    c.flowSegments = get<int>(gr, "grid", "flow_segments", 8);
    check(c.flowSegments >= 4, "grid.flow_segments must be >= 4");

    const json& sc = section(root, "scenarios");
    allowKeys(sc, "scenarios", {"count", "seed", "dir", "errors"});
    c.scenarioCount = get<std::size_t>(sc, "scenarios", "count", 10);
    c.seed = get<std::uint64_t>(sc, "scenarios", "seed", 42);
    c.scenarioDir = resolve(get<std::string>(sc, "scenarios", "dir", "scenarios"));
    c.errors = sc.contains("errors") ? parseErrors(sc.at("errors")) : scenario::defaultErrorTable();

    const json& rk = section(root, "risk");
    allowKeys(rk, "risk", {"measure", "alpha"});
    c.risk.kind = parseRisk(get<std::string>(rk, "risk", "measure", "neutral"));
    c.risk.alpha = get<double>(rk, "risk", "alpha", 0.9);
    check(c.risk.alpha > 0.0 && c.risk.alpha < 1.0, "risk.alpha must lie in (0, 1)");

    const json& sv = section(root, "solver");
    allowKeys(sv, "solver", {"method", "tolerance", "max_iterations", "workers", "extensive_max_variables", "output_dir"});
    c.method = parseMethod(get<std::string>(sv, "solver", "method", "benders"));
    c.benders.tolerance = get<double>(sv, "solver", "tolerance", 1e-6);
    c.benders.maxIterations = get<int>(sv, "solver", "max_iterations", 200);
    c.benders.workers = get<std::size_t>(sv, "solver", "workers", 1);
    c.extensiveMaxVariables = get<std::size_t>(sv, "solver", "extensive_max_variables", c.extensiveMaxVariables);
    c.outputDir = resolve(get<std::string>(sv, "solver", "output_dir", "out"));
    check(c.benders.tolerance > 0.0, "solver.tolerance must be positive");
    check(c.benders.maxIterations > 0, "solver.max_iterations must be positive");
    check(c.benders.workers > 0, "solver.workers must be positive");

    const json& sw = section(root, "tariff_sweep");
    allowKeys(sw, "tariff_sweep", {"levels", "low_window_hours", "high_window_hours", "method", "level_workers"});
    c.sweep.levels = parseLevels(get<std::string>(sw, "tariff_sweep", "levels", "0:1:0.1"));
    std::tie(c.sweep.lowStart, c.sweep.lowEnd) = window(sw, "low_window_hours", {10.0, 14.0});
    std::tie(c.sweep.highStart, c.sweep.highEnd) = window(sw, "high_window_hours", {17.0, 21.0});
    c.sweep.method = parseMethod(get<std::string>(sw, "tariff_sweep", "method", "extensive"));
    c.sweep.levelWorkers = get<std::size_t>(sw, "tariff_sweep", "level_workers", 1);
    check(c.sweep.levelWorkers > 0, "tariff_sweep.level_workers must be positive");

    const std::string inputs = inputBytes(c);
    c.configHash = io::fnv1a64(root.dump() + inputs);
    json instancePart = json::object();
    for (const char* k : {"instance", "horizon", "market", "grid", "scenarios"})
        if (root.contains(k)) instancePart[k] = root.at(k);
    c.instanceHash = io::fnv1a64(instancePart.dump() + inputs);
    return c;
}

double defaultDamCap(const der::DerPark& park, const scenario::Forecast& forecast) {
    double peak = 0.0;
    for (std::size_t t = 0; t < forecast.stepCount(); ++t) {
        double total = 0.0;
        for (const auto& node : forecast.loadActive) total += node[t];
        peak = std::max(peak, total);
    }
    return std::ceil(park.installedPower() + 1.25 * peak);
}

LoadedInstance loadInstance(const RunConfig& c) {
    LoadedInstance out;
    auto& m = out.model;
    m.network = grid::loadNetwork(c.networkDir, c.baseMVA, c.baseKV);
    m.park = der::loadDerPark(c.derDir);
    m.horizon = market::MarketHorizon::uniform(c.steps, c.stepHours, c.rcmWindowHours, c.startHour);
    m.flowSegments = c.flowSegments;
    out.forecast = scenario::loadForecast(c.forecastFile);
    if (out.forecast.stepCount() != c.steps) throw ConfigError("forecast step count differs from horizon.steps");
    if (out.forecast.windowCount() != m.horizon.windowCount())
        throw ConfigError("forecast reserve windows differ from the horizon");
    m.market.prequalifiedPower = c.prequalifiedPower;
    m.market.tariffSchedule = market::expandHourly(c.hourlyTariff, m.horizon);
    m.market.damCap = c.damCap ? *c.damCap : defaultDamCap(m.park, out.forecast);
    m.finalize();
    return out;
}

}  // namespace vpp::app
