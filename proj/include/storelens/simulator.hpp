// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "storelens/probe_plan.hpp"
#include "storelens/scenario.hpp"
#include "storelens/trace.hpp"

namespace storelens {

/// Faults active at one epoch, indexed for route decisions.
class ActiveFaults {
  public:
    ActiveFaults(const std::vector<FaultSpec>& faults, int epoch);

    /// Component is hard-failed (P1) or its service is down (P2) and the
    /// failure detectors know it.
    bool hard_failed(const ComponentId& id) const;
    const FaultSpec* find(const ComponentId& id, FaultKind kind) const;
    const std::vector<const FaultSpec*>& on(const ComponentId& id) const;

    /// Index of a fault in the scenario's fault list (for impact counting).
    int index_of(const FaultSpec* f) const;

  private:
    std::vector<const FaultSpec*> active_;
    std::vector<std::vector<const FaultSpec*>> by_component_;  // parallel to key list
    std::vector<ComponentId> keys_;
    const std::vector<FaultSpec>* all_;
    static const std::vector<const FaultSpec*> kEmpty;
};

/// One sampled probe outcome plus the faults that degraded it.
struct ProbeOutcome {
    ProbeResult result;
    std::vector<int> impacted_by;  // indices into the scenario fault list
};

/// Samples a single probe outcome. Routing: the LNET group is tried
/// round-robin starting at the per-pair offset, skipping detected-failed
/// members; data-OSD probes go to the primary pair member and fail over to
/// the partner (with a latency penalty) when the primary is detected
/// failed. Gray (P3) components drop the request with probability severity;
/// fail-slow (P4) and overload (P5) inflate latency multiplicatively.
/// Every random decision derives its own substream from probe_seed, so a
/// fault can never perturb draws it is not involved in.
ProbeOutcome sample_outcome(const Topology& topo, const ProbeEntry& entry, int epoch,
                            const LatencyModel& latency, const ActiveFaults& active,
                            std::uint64_t probe_seed);

struct SideChannelBatch {
    std::vector<MetricSample> metrics;
    std::vector<LogRecord> logs;
    std::vector<HeartbeatRecord> heartbeats;
};

/// Telemetry for one epoch: metrics for servers and OSDs, background and
/// fault-specific logs, heartbeat state. Dead (P1) components emit no
/// metrics and no background logs; gray (P3) components look entirely
/// normal here.
SideChannelBatch emit_side_channels(const Topology& topo, const Scenario& scenario, int epoch,
                                    std::uint64_t seed);

/// Runs all planned probes over the scenario horizon. Deterministic for a
/// fixed (scenario, plan, seed): every probe, metric and log draw uses its
/// own counter-derived substream.
Trace run_scenario(const Topology& topo, const Scenario& scenario, const ProbePlan& plan,
                   std::uint64_t seed);

}  // namespace storelens
