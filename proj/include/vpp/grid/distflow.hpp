#pragma once

#include <vector>

#include "vpp/der/emit.hpp"
#include "vpp/grid/network.hpp"
#include "vpp/lp/linear_program.hpp"
#include "vpp/scenario/forecast.hpp"

namespace vpp::grid {

/// Variable indices of one scenario's network block. Flows and voltages in
/// p.u., injections, withdrawals and PCC exchange in kW.
struct GridHandles {
    std::vector<std::vector<int>> pFlow;       // [branch][step], parent to child
    std::vector<std::vector<int>> qFlow;       // [branch][step]
    std::vector<std::vector<int>> voltage;     // [bus][step], squared
    std::vector<std::vector<int>> injection;   // [bus][step], net active, injection positive
    std::vector<std::vector<int>> withdrawal;  // [bus][step], positive part of -injection
    std::vector<int> pcc;                      // [step], import positive
    std::vector<int> pccReactive;
};

/// Lossless DistFlow with nodal balances tying device power and scenario
/// loads to the network. Flow limits are emitted separately.
GridHandles emitDistflow(lp::LinearProgram& program, const RadialNetwork& network,
                         const Topology& topology, const scenario::Scenario& scenario,
                         const der::NodalDevicePower& devices, std::size_t stepCount);

/// Inner K-gon of P^2 + Q^2 <= sMax^2 on every branch and step. Throws
/// std::invalid_argument for K < 4.
void emitFlowLimits(lp::LinearProgram& program, const RadialNetwork& network,
                    const GridHandles& handles, int segments = 8);

/// The half-plane normals and offset used by emitFlowLimits, in the same
/// units as `sMax`.
struct FlowPolygon {
    std::vector<double> cosine;
    std::vector<double> sine;
    double offset = 0.0;

    [[nodiscard]] bool admits(double p, double q, double slack = 0.0) const;
};

FlowPolygon flowPolygon(double sMax, int segments);

}  // namespace vpp::grid
