#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace vpp::grid {

class NetworkError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Squared-voltage limits in p.u.^2. The default is a +-5 % band.
struct Bus {
    int id = 0;
    double vMin = 0.9025;
    double vMax = 1.1025;
    bool isRoot = false;
};

struct Branch {
    int fromBus = 0;
    int toBus = 0;
    double r = 0.0;     // p.u.
    double x = 0.0;     // p.u.
    double sMax = 0.0;  // kVA
};

/// Buses are addressed by position; `Bus::id` must equal the index.
struct RadialNetwork {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    double baseMVA = 1.0;
    double baseKV = 0.4;

    [[nodiscard]] double baseKva() const { return baseMVA * 1000.0; }
    [[nodiscard]] std::size_t busCount() const { return buses.size(); }
};

/// Tree oriented away from the root.
struct Topology {
    int root = -1;
    std::vector<int> parent;                  // -1 at the root
    std::vector<int> parentBranch;            // branch feeding the bus, -1 at the root
    std::vector<std::vector<int>> children;   // child branch indices per bus
    std::vector<int> order;                   // breadth-first from the root
    std::vector<int> depth;
};

/// Throws NetworkError on a cycle, a disconnected bus, a missing or repeated
/// root, bad ids or bad branch data. Returns the oriented tree.
Topology validateRadial(const RadialNetwork& network);

/// Random radial feeder: bus 0 is the root, each new bus attaches to a
/// recent predecessor, so depth grows with size.
RadialNetwork syntheticFeeder(std::size_t busCount, std::uint64_t seed);

/// <dir>/buses.csv and <dir>/branches.csv; bases come from the caller.
RadialNetwork loadNetwork(const std::filesystem::path& dir, double baseMVA, double baseKV);
void saveNetwork(const RadialNetwork& network, const std::filesystem::path& dir);

}  // namespace vpp::grid
