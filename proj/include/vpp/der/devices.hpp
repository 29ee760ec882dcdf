#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vpp::der {

struct DistributedGenerator {
    std::string id;
    int node = 0;
    int profile = 0;  // capacity-factor series index
    double nominalPower = 0.0;    // kW
    double inverterRating = 0.0;  // kVA
    double marginalCost = 0.0;    // currency/kWh
};

/// Single-zone RC building with a constant-COP heat pump.
struct HeatPump {
    std::string id;
    int node = 0;
    double maxElecPower = 0.0;        // kW
    double cop = 3.0;
    double thermalResistance = 1.0;   // K/kW
    double thermalCapacitance = 1.0;  // kWh/K
    double comfortMin = 19.0;
    double comfortMax = 23.0;
    double initialTemp = 21.0;
};

/// One plug-in session. Powers live on steps [arrival, departure).
struct EvChargingEvent {
    std::string id;
    int node = 0;
    int arrival = 0;
    int departure = 1;
    double batteryCapacity = 0.0;  // kWh
    double arrivalSoc = 0.0;       // kWh
    double maxChargePower = 0.0;   // kW
    double maxDischargePower = 0.0;
    double chargeEff = 1.0;
    double dischargeEff = 1.0;
    double minAvgChargeRate = 0.0;      // kW, grid side
    double dischargeCompensation = 0.0; // currency/kWh discharged
};

struct Bess {
    std::string id;
    int node = 0;
    double energyCapacity = 0.0;  // kWh
    double maxPower = 0.0;        // kW
    double inverterRating = 0.0;  // kVA
    double chargeEff = 1.0;
    double dischargeEff = 1.0;
    double initialSoc = 0.0;
    double cycleCost = 0.0;  // currency/kWh throughput
};

struct DerPark {
    std::vector<DistributedGenerator> generators;
    std::vector<HeatPump> heatPumps;
    std::vector<EvChargingEvent> evEvents;
    std::vector<Bess> batteries;

    /// Checks per-device invariants and node references against `nodeCount`.
    /// Throws std::invalid_argument naming the offending device.
    void validate(std::size_t nodeCount) const;
    [[nodiscard]] std::size_t profileCount() const;
    /// Sum of device power limits, used to cap day-ahead bids.
    [[nodiscard]] double installedPower() const;
};

/// Reads <dir>/generators.csv, heat_pumps.csv, ev_events.csv, batteries.csv.
/// Missing files mean an empty device class.
DerPark loadDerPark(const std::filesystem::path& dir);
void saveDerPark(const DerPark& park, const std::filesystem::path& dir);

}  // namespace vpp::der
