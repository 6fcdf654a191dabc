// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "storelens/fault.hpp"
#include "storelens/latency.hpp"
#include "storelens/topology.hpp"

namespace storelens {

/// Distribution parameters for the component-side telemetry. Healthy
/// components draw from the baseline bands; overloaded (P5) targets draw
/// from bands shifted by severity.
struct SideChannelParams {
    double loadavg_mean = 30.0;
    double loadavg_sd = 10.0;
    double overload_loadavg_span = 350.0;  // added at severity 1.0
    double overload_loadavg_sd = 20.0;
    double await_mean_ms = 10.0;
    double await_sd_ms = 3.0;
    double overload_await_span_ms = 990.0;
    double util_mean = 0.30;
    double util_sd = 0.08;
    double overload_util_span = 0.70;
};

/// A fault-injection scenario over a fixed horizon of one-minute epochs.
struct Scenario {
    std::string id = "scenario";
    int horizon_epochs = 5;
    std::vector<FaultSpec> faults;
    LatencyModel latency;
    SideChannelParams side_channels;
};

/// Adds a fault to the scenario after validating it against the topology
/// and horizon. Overlapping faults on one target are allowed; failure kinds
/// dominate overloads and slowdown factors compose multiplicatively.
void inject(Scenario& scenario, const Topology& topo, const FaultSpec& fault);

}  // namespace storelens
