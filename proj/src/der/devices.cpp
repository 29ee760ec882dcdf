#include "vpp/der/devices.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vpp/io/csv.hpp"

namespace vpp::der {

namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string& id, const char* what) {
    if (!ok) throw std::invalid_argument("device '" + id + "': " + what);
}

void checkNode(int node, std::size_t nodeCount, const std::string& id) {
    require(node >= 0 && static_cast<std::size_t>(node) < nodeCount, id, "unknown node");
}

bool efficiency(double e) { return e > 0.0 && e <= 1.0; }

}  // namespace

void DerPark::validate(std::size_t nodeCount) const {
    for (const auto& d : generators) {
        checkNode(d.node, nodeCount, d.id);
        require(d.nominalPower >= 0.0, d.id, "negative nominal power");
        require(d.nominalPower <= d.inverterRating, d.id, "nominal power above inverter rating");
        require(d.marginalCost >= 0.0, d.id, "negative marginal cost");
        require(d.profile >= 0, d.id, "negative profile index");
    }
    for (const auto& d : heatPumps) {
        checkNode(d.node, nodeCount, d.id);
        require(d.maxElecPower >= 0.0 && d.cop > 0.0, d.id, "bad power or COP");
        require(d.thermalResistance > 0.0 && d.thermalCapacitance > 0.0, d.id, "R and C must be positive");
        require(d.comfortMin <= d.initialTemp && d.initialTemp <= d.comfortMax, d.id,
                "initial temperature outside comfort band");
    }
    for (const auto& d : evEvents) {
        checkNode(d.node, nodeCount, d.id);
        require(d.arrival >= 0 && d.arrival < d.departure, d.id, "arrival must precede departure");
        require(d.arrivalSoc >= 0.0 && d.arrivalSoc <= d.batteryCapacity, d.id, "arrival SoC out of range");
        require(efficiency(d.chargeEff) && efficiency(d.dischargeEff), d.id, "efficiency outside (0,1]");
        require(d.maxChargePower >= 0.0 && d.maxDischargePower >= 0.0, d.id, "negative power limit");
        require(d.minAvgChargeRate >= 0.0 && d.dischargeCompensation >= 0.0, d.id, "negative rate or cost");
    }
    for (const auto& d : batteries) {
        checkNode(d.node, nodeCount, d.id);
        require(d.initialSoc >= 0.0 && d.initialSoc <= d.energyCapacity, d.id, "initial SoC out of range");
        require(efficiency(d.chargeEff) && efficiency(d.dischargeEff), d.id, "efficiency outside (0,1]");
        require(d.maxPower >= 0.0 && d.cycleCost >= 0.0, d.id, "negative power or cycle cost");
    }
}

std::size_t DerPark::profileCount() const {
    int top = -1;
    for (const auto& d : generators) top = std::max(top, d.profile);
    return static_cast<std::size_t>(top + 1);
}

double DerPark::installedPower() const {
    double total = 0.0;
    for (const auto& d : generators) total += d.nominalPower;
    for (const auto& d : heatPumps) total += d.maxElecPower;
    for (const auto& d : evEvents) total += std::max(d.maxChargePower, d.maxDischargePower);
    for (const auto& d : batteries) total += d.maxPower;
    return total;
}

DerPark loadDerPark(const fs::path& dir) {
    DerPark park;
    if (const auto p = dir / "generators.csv"; fs::exists(p)) {
        const auto t = io::CsvTable::read(p);
        for (std::size_t r = 0; r < t.rowCount(); ++r) {
            park.generators.push_back({t.text(r, "id"), t.integer(r, "node"), t.integer(r, "profile"),
                                       t.number(r, "nominal_kw"), t.number(r, "inverter_kva"),
                                       t.number(r, "marginal_cost_per_kwh")});
        }
    }
    if (const auto p = dir / "heat_pumps.csv"; fs::exists(p)) {
        const auto t = io::CsvTable::read(p);
        for (std::size_t r = 0; r < t.rowCount(); ++r) {
            park.heatPumps.push_back({t.text(r, "id"), t.integer(r, "node"), t.number(r, "max_elec_kw"),
                                      t.number(r, "cop"), t.number(r, "r_k_per_kw"),
                                      t.number(r, "c_kwh_per_k"), t.number(r, "comfort_min_c"),
                                      t.number(r, "comfort_max_c"), t.number(r, "initial_temp_c")});
        }
    }
    if (const auto p = dir / "ev_events.csv"; fs::exists(p)) {
        const auto t = io::CsvTable::read(p);
        for (std::size_t r = 0; r < t.rowCount(); ++r) {
            park.evEvents.push_back({t.text(r, "id"), t.integer(r, "node"), t.integer(r, "arrival_step"),
                                     t.integer(r, "departure_step"), t.number(r, "capacity_kwh"),
                                     t.number(r, "arrival_soc_kwh"), t.number(r, "max_charge_kw"),
                                     t.number(r, "max_discharge_kw"), t.number(r, "charge_eff"),
                                     t.number(r, "discharge_eff"), t.number(r, "min_avg_rate_kw"),
                                     t.number(r, "discharge_comp_per_kwh")});
        }
    }
    if (const auto p = dir / "batteries.csv"; fs::exists(p)) {
        const auto t = io::CsvTable::read(p);
        for (std::size_t r = 0; r < t.rowCount(); ++r) {
            park.batteries.push_back({t.text(r, "id"), t.integer(r, "node"), t.number(r, "capacity_kwh"),
                                      t.number(r, "max_kw"), t.number(r, "inverter_kva"),
                                      t.number(r, "charge_eff"), t.number(r, "discharge_eff"),
                                      t.number(r, "initial_soc_kwh"), t.number(r, "cycle_cost_per_kwh")});
        }
    }
    return park;
}

void saveDerPark(const DerPark& park, const fs::path& dir) {
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        w.header({"id", "node", "profile", "nominal_kw", "inverter_kva", "marginal_cost_per_kwh"});
        for (const auto& d : park.generators) {
            w.cell(d.id).cell(d.node).cell(d.profile).cell(d.nominalPower).cell(d.inverterRating)
                .cell(d.marginalCost);
            w.endRow();
        }
        io::writeTextFile(dir / "generators.csv", out.str());
    }
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        w.header({"id", "node", "max_elec_kw", "cop", "r_k_per_kw", "c_kwh_per_k", "comfort_min_c",
                  "comfort_max_c", "initial_temp_c"});
        for (const auto& d : park.heatPumps) {
            w.cell(d.id).cell(d.node).cell(d.maxElecPower).cell(d.cop).cell(d.thermalResistance)
                .cell(d.thermalCapacitance).cell(d.comfortMin).cell(d.comfortMax).cell(d.initialTemp);
            w.endRow();
        }
        io::writeTextFile(dir / "heat_pumps.csv", out.str());
    }
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        w.header({"id", "node", "arrival_step", "departure_step", "capacity_kwh", "arrival_soc_kwh",
                  "max_charge_kw", "max_discharge_kw", "charge_eff", "discharge_eff", "min_avg_rate_kw",
                  "discharge_comp_per_kwh"});
        for (const auto& d : park.evEvents) {
            w.cell(d.id).cell(d.node).cell(d.arrival).cell(d.departure).cell(d.batteryCapacity)
                .cell(d.arrivalSoc).cell(d.maxChargePower).cell(d.maxDischargePower).cell(d.chargeEff)
                .cell(d.dischargeEff).cell(d.minAvgChargeRate).cell(d.dischargeCompensation);
            w.endRow();
        }
        io::writeTextFile(dir / "ev_events.csv", out.str());
    }
    {
        std::ostringstream out;
        io::CsvWriter w(out);
        w.header({"id", "node", "capacity_kwh", "max_kw", "inverter_kva", "charge_eff", "discharge_eff",
                  "initial_soc_kwh", "cycle_cost_per_kwh"});
        for (const auto& d : park.batteries) {
            w.cell(d.id).cell(d.node).cell(d.energyCapacity).cell(d.maxPower).cell(d.inverterRating)
                .cell(d.chargeEff).cell(d.dischargeEff).cell(d.initialSoc).cell(d.cycleCost);
            w.endRow();
        }
        io::writeTextFile(dir / "batteries.csv", out.str());
    }
}

}  // namespace vpp::der
