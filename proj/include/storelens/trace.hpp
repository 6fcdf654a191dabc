// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "storelens/component.hpp"
#include "storelens/fault.hpp"
#include "storelens/latency.hpp"

namespace storelens {

enum class ProbeStatus : std::uint8_t { Ok, Slow, Timeout, Error };

const char* status_name(ProbeStatus s);

struct ProbeResult {
    int epoch = 0;
    ComponentId monitor;
    ComponentId target;
    OpKind op{OpKind::WrEx};
    ProbeFlavor flavor{ProbeFlavor::Disk};
    double latency_ms = 0.0;
    ProbeStatus status{ProbeStatus::Ok};
    ComponentId lnet;                       // forwarding node that carried it
    std::optional<ComponentId> serving_ds;  // pair member that served a data-OSD probe
};

struct MetricSample {
    ComponentId component;
    int epoch = 0;
    std::optional<double> loadavg;      // servers
    std::optional<double> await_ms;     // OSDs
    std::optional<double> utilization;  // OSDs, in [0,1]
};

struct LogRecord {
    ComponentId component;
    int epoch = 0;
    std::string raw_text;
};

struct HeartbeatRecord {
    ComponentId component;
    int epoch = 0;
    bool up = true;
};

/// Ground truth stored beside a trace, never fed to inference. The impact
/// counter records how many probe outcomes the fault actually degraded;
/// faults with zero impact are out of recall scope.
struct InjectedFault {
    FaultSpec fault;
    std::int64_t impacted_probes = 0;
};

struct Trace {
    std::string scenario_id;
    std::uint64_t seed = 0;
    int horizon_epochs = 0;
    double slo_ms = 1000.0;
    double timeout_ms = 30000.0;
    std::vector<ProbeResult> probes;
    std::vector<MetricSample> metrics;
    std::vector<LogRecord> logs;
    std::vector<HeartbeatRecord> heartbeats;
    std::vector<InjectedFault> truth;
};

/// Line-delimited trace records, one JSON object per probe/metric/log/
/// heartbeat event. Ground truth goes to a separate sidecar file.
void write_trace(const Trace& trace, std::ostream& out);
void write_truth_sidecar(const Trace& trace, std::ostream& out);
Trace read_trace(std::istream& in);
std::vector<InjectedFault> read_truth_sidecar(std::istream& in);

}  // namespace storelens
