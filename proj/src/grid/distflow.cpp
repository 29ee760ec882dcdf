#include "vpp/grid/distflow.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vpp::grid {

using lp::kInf;
using lp::LinearExpr;
using lp::Sense;

namespace {

std::string tag(const char* sym, std::size_t a, std::size_t t) {
    return std::string(sym) + "[" + std::to_string(a) + "][" + std::to_string(t) + "]";
}

}  // namespace

GridHandles emitDistflow(lp::LinearProgram& program, const RadialNetwork& network,
                         const Topology& topology, const scenario::Scenario& scenario,
                         const der::NodalDevicePower& devices, std::size_t stepCount) {
    const std::size_t nb = network.buses.size();
    const std::size_t nl = network.branches.size();
    const double sBase = network.baseKva();
    const auto& loadP = scenario.series.loadActive;
    const auto& loadQ = scenario.series.loadReactive;
    auto load = [](const std::vector<std::vector<double>>& l, std::size_t i, std::size_t t) {
        return i < l.size() ? l[i].at(t) : 0.0;
    };

    GridHandles h;
    h.pFlow.assign(nl, {});
    h.qFlow.assign(nl, {});
    h.voltage.assign(nb, {});
    h.injection.assign(nb, {});
    h.withdrawal.assign(nb, {});
    for (std::size_t t = 0; t < stepCount; ++t) {
        for (std::size_t k = 0; k < nl; ++k) {
            h.pFlow[k].push_back(program.addVariable(-kInf, kInf, tag("pf", k, t)).index);
            h.qFlow[k].push_back(program.addVariable(-kInf, kInf, tag("qf", k, t)).index);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const Bus& b = network.buses[i];
            const bool root = static_cast<int>(i) == topology.root;
            h.voltage[i].push_back(
                program.addVariable(root ? 1.0 : b.vMin, root ? 1.0 : b.vMax, tag("v", i, t)).index);
            h.injection[i].push_back(program.addVariable(-kInf, kInf, tag("pinj", i, t)).index);
            h.withdrawal[i].push_back(program.addVariable(0.0, kInf, tag("pwit", i, t)).index);
        }
        h.pcc.push_back(program.addVariable(-kInf, kInf, "pcc[" + std::to_string(t) + "]").index);
        h.pccReactive.push_back(program.addVariable(-kInf, kInf, "qpcc[" + std::to_string(t) + "]").index);

        for (std::size_t i = 0; i < nb; ++i) {
            const int pin = h.injection[i][t];
            // pinj = device injections - load
            LinearExpr def;
            def.add(pin, 1.0);
            def.add(devices.active[i][t], -1.0);
            program.addConstraint(def, Sense::Equal, -load(loadP, i, t), tag("inj", i, t));
            program.addConstraint({{h.withdrawal[i][t], 1.0}, {pin, 1.0}}, Sense::GreaterEqual, 0.0,
                                  tag("wit", i, t));

            // kW balance: inflow - outflow + injection = 0
            LinearExpr pBal;
            LinearExpr qBal;
            pBal.add(pin, 1.0);
            qBal.add(devices.reactive[i][t], 1.0);
            const bool root = static_cast<int>(i) == topology.root;
            if (root) {
                pBal.add(h.pcc[t], 1.0);
                qBal.add(h.pccReactive[t], 1.0);
            } else {
                const auto in = static_cast<std::size_t>(topology.parentBranch[i]);
                pBal.add(h.pFlow[in][t], sBase);
                qBal.add(h.qFlow[in][t], sBase);
            }
            for (int c : topology.children[i]) {
                pBal.add(h.pFlow[static_cast<std::size_t>(c)][t], -sBase);
                qBal.add(h.qFlow[static_cast<std::size_t>(c)][t], -sBase);
            }
            program.addConstraint(pBal, Sense::Equal, 0.0, tag("pbal", i, t));
            program.addConstraint(qBal, Sense::Equal, load(loadQ, i, t), tag("qbal", i, t));
        }
        for (std::size_t j = 0; j < nb; ++j) {
            if (static_cast<int>(j) == topology.root) continue;
            const auto k = static_cast<std::size_t>(topology.parentBranch[j]);
            const auto i = static_cast<std::size_t>(topology.parent[j]);
            const Branch& br = network.branches[k];
            program.addConstraint({{h.voltage[j][t], 1.0},
                                   {h.voltage[i][t], -1.0},
                                   {h.pFlow[k][t], 2.0 * br.r},
                                   {h.qFlow[k][t], 2.0 * br.x}},
                                  Sense::Equal, 0.0, tag("volt", j, t));
        }
    }
    return h;
}

bool FlowPolygon::admits(double p, double q, double slack) const {
    for (std::size_t k = 0; k < cosine.size(); ++k) {
        if (cosine[k] * p + sine[k] * q > offset + slack) return false;
    }
    return true;
}

FlowPolygon flowPolygon(double sMax, int segments) {
    if (segments < 4) throw std::invalid_argument("flow polygon needs at least 4 segments");
    FlowPolygon poly;
    poly.offset = sMax * std::cos(std::numbers::pi / segments);
    for (int k = 0; k < segments; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / segments;
        const auto snap = [](double v) { return std::abs(v) < 1e-15 ? 0.0 : v; };
        poly.cosine.push_back(snap(std::cos(theta)));
        poly.sine.push_back(snap(std::sin(theta)));
    }
    return poly;
}

void emitFlowLimits(lp::LinearProgram& program, const RadialNetwork& network,
                    const GridHandles& handles, int segments) {
    for (std::size_t k = 0; k < network.branches.size(); ++k) {
        const auto poly = flowPolygon(network.branches[k].sMax / network.baseKva(), segments);
        for (std::size_t t = 0; t < handles.pFlow[k].size(); ++t) {
            for (std::size_t s = 0; s < poly.cosine.size(); ++s) {
                program.addConstraint({{handles.pFlow[k][t], poly.cosine[s]}, {handles.qFlow[k][t], poly.sine[s]}},
                                      Sense::LessEqual, poly.offset, tag("slim", k, t));
            }
        }
    }
}

}  // namespace vpp::grid
