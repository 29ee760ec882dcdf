#include "vpp/grid/network.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <string>

#include "vpp/io/csv.hpp"
#include "vpp/scenario/rng.hpp"

namespace vpp::grid {

namespace fs = std::filesystem;

Topology validateRadial(const RadialNetwork& network) {
    const std::size_t n = network.buses.size();
    if (n == 0) throw NetworkError("network has no buses");
    Topology topo;
    for (std::size_t i = 0; i < n; ++i) {
        const Bus& b = network.buses[i];
        if (b.id != static_cast<int>(i)) throw NetworkError("bus ids must equal their position");
        if (!(b.vMin > 0.0) || b.vMin > b.vMax) {
            throw NetworkError("bus " + std::to_string(i) + " has invalid voltage limits");
        }
        if (b.isRoot) {
            if (topo.root >= 0) throw NetworkError("multiple root buses");
            topo.root = static_cast<int>(i);
        }
    }
    if (topo.root < 0) throw NetworkError("no root bus");

    std::vector<std::vector<int>> incident(n);
    for (std::size_t k = 0; k < network.branches.size(); ++k) {
        const Branch& br = network.branches[k];
        const auto bad = [n](int b) { return b < 0 || static_cast<std::size_t>(b) >= n; };
        if (bad(br.fromBus) || bad(br.toBus) || br.fromBus == br.toBus) {
            throw NetworkError("branch " + std::to_string(k) + " references invalid buses");
        }
        if (br.r < 0.0 || br.x < 0.0 || !(br.sMax > 0.0)) {
            throw NetworkError("branch " + std::to_string(k) + " has invalid impedance or rating");
        }
        incident[static_cast<std::size_t>(br.fromBus)].push_back(static_cast<int>(k));
        incident[static_cast<std::size_t>(br.toBus)].push_back(static_cast<int>(k));
    }

    topo.parent.assign(n, -1);
    topo.parentBranch.assign(n, -1);
    topo.children.assign(n, {});
    topo.depth.assign(n, -1);
    std::vector<char> usedBranch(network.branches.size(), 0);
    std::deque<int> queue{topo.root};
    topo.depth[static_cast<std::size_t>(topo.root)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        topo.order.push_back(u);
        for (int k : incident[static_cast<std::size_t>(u)]) {
            if (usedBranch[static_cast<std::size_t>(k)]) continue;
            usedBranch[static_cast<std::size_t>(k)] = 1;
            const Branch& br = network.branches[static_cast<std::size_t>(k)];
            const int v = br.fromBus == u ? br.toBus : br.fromBus;
            auto& dv = topo.depth[static_cast<std::size_t>(v)];
            if (dv >= 0) throw NetworkError("cycle detected through bus " + std::to_string(v));
            dv = topo.depth[static_cast<std::size_t>(u)] + 1;
            topo.parent[static_cast<std::size_t>(v)] = u;
            topo.parentBranch[static_cast<std::size_t>(v)] = k;
            topo.children[static_cast<std::size_t>(u)].push_back(k);
            queue.push_back(v);
        }
    }
    if (topo.order.size() != n) throw NetworkError("disconnected bus");
    if (network.branches.size() != n - 1) throw NetworkError("cycle detected");
    return topo;
}

RadialNetwork syntheticFeeder(std::size_t busCount, std::uint64_t seed) {
    if (busCount == 0) throw NetworkError("feeder needs at least one bus");
    scenario::CounterRng rng(seed, 0x5eed);
    RadialNetwork net;
    net.baseMVA = 1.0;
    net.baseKV = 0.4;
    for (std::size_t i = 0; i < busCount; ++i) net.buses.push_back({static_cast<int>(i), 0.9025, 1.1025, i == 0});
    for (std::size_t i = 1; i < busCount; ++i) {
        const std::size_t back = 1 + rng.below(std::min<std::uint64_t>(i, 3));
        const auto parent = static_cast<int>(i - back);
        const double r = 0.002 + 0.004 * rng.uniform();
        const double x = 0.001 + 0.003 * rng.uniform();
        const double sMax = 400.0 + 400.0 * rng.uniform();
        net.branches.push_back({parent, static_cast<int>(i), r, x, sMax});
    }
    return net;
}

RadialNetwork loadNetwork(const fs::path& dir, double baseMVA, double baseKV) {
    RadialNetwork net;
    net.baseMVA = baseMVA;
    net.baseKV = baseKV;
    const auto buses = io::CsvTable::read(dir / "buses.csv");
    for (std::size_t r = 0; r < buses.rowCount(); ++r) {
        net.buses.push_back({buses.integer(r, "id"), buses.number(r, "v_min_pu2"),
                             buses.number(r, "v_max_pu2"), buses.integer(r, "is_root") != 0});
    }
    const auto branches = io::CsvTable::read(dir / "branches.csv");
    for (std::size_t r = 0; r < branches.rowCount(); ++r) {
        net.branches.push_back({branches.integer(r, "from"), branches.integer(r, "to"),
                                branches.number(r, "r_pu"), branches.number(r, "x_pu"),
                                branches.number(r, "s_max_kva")});
    }
    return net;
}

void saveNetwork(const RadialNetwork& network, const fs::path& dir) {
    std::ostringstream buses;
    io::CsvWriter wb(buses);
    wb.header({"id", "v_min_pu2", "v_max_pu2", "is_root"});
    for (const auto& b : network.buses) {
        wb.cell(b.id).cell(b.vMin).cell(b.vMax).cell(b.isRoot ? 1 : 0);
        wb.endRow();
    }
    io::writeTextFile(dir / "buses.csv", buses.str());
    std::ostringstream branches;
    io::CsvWriter wr(branches);
    wr.header({"from", "to", "r_pu", "x_pu", "s_max_kva"});
    for (const auto& b : network.branches) {
        wr.cell(b.fromBus).cell(b.toBus).cell(b.r).cell(b.x).cell(b.sMax);
        wr.endRow();
    }
    io::writeTextFile(dir / "branches.csv", branches.str());
}

}  // namespace vpp::grid
