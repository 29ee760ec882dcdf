#include "vpp/scenario/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "vpp/io/csv.hpp"

namespace vpp::scenario {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string scenarioFileName(std::size_t s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scenario_%04zu.csv", s);
    return buf;
}

/// Imbalance columns are written only when `sc` is given.
std::string renderSeries(const Forecast& f, const Scenario* sc, const std::vector<int>& windowOf) {
    if (windowOf.size() != f.stepCount()) throw std::invalid_argument("window map length differs from series");
    std::ostringstream out;
    io::CsvWriter w(out);
    std::vector<std::string> head{"step", "window", "dam_price", "rcm_up_price", "rcm_dn_price",
                                  "ram_up_price", "ram_dn_price", "mfrr_up_price", "mfrr_dn_price"};
    if (sc) {
        head.push_back("imbalance_short_price");
        head.push_back("imbalance_long_price");
    }
    head.push_back("ambient_temp");
    head.push_back("ev_availability");
    for (std::size_t g = 0; g < f.capacityFactor.size(); ++g) head.push_back("cf_" + std::to_string(g));
    for (std::size_t i = 0; i < f.loadActive.size(); ++i) head.push_back("load_p_" + std::to_string(i));
    for (std::size_t i = 0; i < f.loadReactive.size(); ++i) head.push_back("load_q_" + std::to_string(i));
    w.header(head);
    for (std::size_t t = 0; t < f.stepCount(); ++t) {
        const auto win = static_cast<std::size_t>(windowOf.at(t));
        w.cell(static_cast<long long>(t)).cell(static_cast<long long>(win));
        w.cell(f.dayAheadPrice[t]).cell(f.rcmUpPrice.at(win)).cell(f.rcmDnPrice.at(win));
        w.cell(f.ramUpPrice[t]).cell(f.ramDnPrice[t]).cell(f.mfrrUpPrice[t]).cell(f.mfrrDnPrice[t]);
        if (sc) w.cell(sc->imbalanceShort[t]).cell(sc->imbalanceLong[t]);
        w.cell(f.ambientTemp[t]).cell(f.evAvailability[t]);
        for (const auto& cf : f.capacityFactor) w.cell(cf[t]);
        for (const auto& l : f.loadActive) w.cell(l[t]);
        for (const auto& l : f.loadReactive) w.cell(l[t]);
        w.endRow();
    }
    return out.str();
}

std::size_t countPrefixed(const io::CsvTable& t, const std::string& prefix) {
    std::size_t n = 0;
    while (t.hasColumn(prefix + std::to_string(n))) ++n;
    return n;
}

Scenario parseScenario(const io::CsvTable& t, std::size_t generators, std::size_t nodes,
                       std::size_t windows, double probability, bool withImbalance) {
    Scenario sc;
    sc.probability = probability;
    Forecast& f = sc.series;
    f.dayAheadPrice = t.numbers("dam_price");
    f.ramUpPrice = t.numbers("ram_up_price");
    f.ramDnPrice = t.numbers("ram_dn_price");
    f.mfrrUpPrice = t.numbers("mfrr_up_price");
    f.mfrrDnPrice = t.numbers("mfrr_dn_price");
    f.ambientTemp = t.numbers("ambient_temp");
    f.evAvailability = t.numbers("ev_availability");
    if (withImbalance) {
        sc.imbalanceShort = t.numbers("imbalance_short_price");
        sc.imbalanceLong = t.numbers("imbalance_long_price");
    }
    f.rcmUpPrice.assign(windows, 0.0);
    f.rcmDnPrice.assign(windows, 0.0);
    std::vector<bool> seen(windows, false);
    for (std::size_t r = 0; r < t.rowCount(); ++r) {
        const int win = t.integer(r, "window");
        if (win < 0 || static_cast<std::size_t>(win) >= windows) throw io::IoError("window index out of range");
        const double up = t.number(r, "rcm_up_price"), dn = t.number(r, "rcm_dn_price");
        if (!seen[win]) {
            f.rcmUpPrice[win] = up;
            f.rcmDnPrice[win] = dn;
            seen[win] = true;
        } else if (f.rcmUpPrice[win] != up || f.rcmDnPrice[win] != dn) {
            throw io::IoError("reserve capacity price varies inside window " + std::to_string(win));
        }
    }
    for (std::size_t g = 0; g < generators; ++g) f.capacityFactor.push_back(t.numbers("cf_" + std::to_string(g)));
    for (std::size_t i = 0; i < nodes; ++i) f.loadActive.push_back(t.numbers("load_p_" + std::to_string(i)));
    for (std::size_t i = 0; i < nodes; ++i) f.loadReactive.push_back(t.numbers("load_q_" + std::to_string(i)));
    return sc;
}

}  // namespace

ScenarioFiles saveScenarioSet(const ScenarioSet& set, const std::vector<int>& windowOf, const fs::path& dir,
                              const std::map<std::string, std::string>& tags) {
    if (set.scenarios.empty()) throw std::invalid_argument("refusing to save an empty scenario set");
    fs::create_directories(dir);
    // Files from an earlier, larger set would otherwise linger next to the new manifest.
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("scenario_", 0) == 0 && entry.path().extension() == ".csv") fs::remove(entry.path());
    }
    const Forecast& first = set.scenarios.front().series;
    std::string hashInput;
    json files = json::array();
    for (std::size_t s = 0; s < set.scenarios.size(); ++s) {
        const std::string name = scenarioFileName(s);
        const std::string body = renderSeries(set.scenarios[s].series, &set.scenarios[s], windowOf);
        io::writeTextFile(dir / name, body);
        hashInput += name;
        hashInput += body;
        files.push_back({{"file", name}, {"probability", set.scenarios[s].probability}});
    }
    json errors = json::object();
    for (const auto& [type, spec] : set.errors) {
        errors[std::string(errorTypeName(type))] = {
            {"distribution", spec.kind == ErrorKind::Normal ? "normal" : "uniform"},
            {"mean", spec.mean},
            {"std_dev", spec.stdDev},
            {"relative", spec.relative}};
    }
    ScenarioFiles result{io::fnv1a64(hashInput), set.scenarios.size()};
    json manifest = {{"format", "vpp-scenarios/1"},
                     {"seed", set.seed},
                     {"count", set.scenarios.size()},
                     {"steps", first.stepCount()},
                     {"windows", first.windowCount()},
                     {"generators", first.capacityFactor.size()},
                     {"nodes", first.loadActive.size()},
                     {"errors", errors},
                     {"scenarios", files},
                     {"content_hash", result.contentHash}};
    if (!tags.empty()) manifest["tags"] = tags;
    io::writeTextFile(dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

ScenarioSet loadScenarioSet(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw io::IoError("scenario directory not found: " + dir.string());
    const json manifest = json::parse(io::readTextFile(dir / "manifest.json"));
    if (manifest.value("format", "") != "vpp-scenarios/1") throw io::IoError("unknown scenario manifest format");
    ScenarioSet set;
    set.seed = manifest.at("seed").get<std::uint64_t>();
    for (const auto& [name, spec] : manifest.at("errors").items()) {
        const auto type = errorTypeFromName(name);
        if (!type) throw io::IoError("unknown error type '" + name + "' in manifest");
        set.errors[*type] = {spec.at("distribution") == "normal" ? ErrorKind::Normal : ErrorKind::Uniform,
                             spec.at("mean").get<double>(), spec.at("std_dev").get<double>(),
                             spec.at("relative").get<bool>()};
    }
    const auto generators = manifest.at("generators").get<std::size_t>();
    const auto nodes = manifest.at("nodes").get<std::size_t>();
    const auto windows = manifest.at("windows").get<std::size_t>();
    std::string hashInput;
    for (const auto& entry : manifest.at("scenarios")) {
        const std::string name = entry.at("file").get<std::string>();
        const std::string body = io::readTextFile(dir / name);
        hashInput += name;
        hashInput += body;
        std::istringstream in(body);
        const auto table = io::CsvTable::parse(in, (dir / name).string());
        set.scenarios.push_back(
            parseScenario(table, generators, nodes, windows, entry.at("probability").get<double>(), true));
    }
    if (io::fnv1a64(hashInput) != manifest.at("content_hash").get<std::string>()) {
        throw io::IoError("scenario files do not match the manifest hash in " + dir.string());
    }
    return set;
}

std::string manifestHash(const fs::path& dir) {
    const json manifest = json::parse(io::readTextFile(dir / "manifest.json"));
    return manifest.at("content_hash").get<std::string>();
}

std::map<std::string, std::string> manifestTags(const fs::path& dir) {
    const json manifest = json::parse(io::readTextFile(dir / "manifest.json"));
    if (!manifest.contains("tags")) return {};
    return manifest.at("tags").get<std::map<std::string, std::string>>();
}

void saveForecast(const Forecast& forecast, const std::vector<int>& windowOf, const fs::path& file) {
    forecast.validate();
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    io::writeTextFile(file, renderSeries(forecast, nullptr, windowOf));
}

Forecast loadForecast(const fs::path& file) {
    const auto table = io::CsvTable::read(file);
    std::size_t windows = 0;
    for (std::size_t r = 0; r < table.rowCount(); ++r)
        windows = std::max(windows, static_cast<std::size_t>(std::max(0, table.integer(r, "window"))) + 1);
    auto sc = parseScenario(table, countPrefixed(table, "cf_"), countPrefixed(table, "load_p_"), windows, 1.0, false);
    sc.series.validate();
    return sc.series;
}

}  // namespace vpp::scenario
