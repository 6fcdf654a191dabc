// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>

#include "storelens/errors.hpp"

namespace storelens {

/// Probe operation kinds. CrWr and RmEx exercise the metadata servers (and
/// their disks); WrEx exercises the data servers and OSDs.
enum class OpKind : std::uint8_t { CrWr, WrEx, RmEx };

/// A metadata or data probe either hits the server's memory path or goes
/// all the way to the backing disks.
enum class ProbeFlavor : std::uint8_t { Memory, Disk };

const char* op_kind_name(OpKind k);
const char* flavor_name(ProbeFlavor f);

struct OpLatency {
    double mu_log_ms = std::log(20.0);  // log-normal location, log-milliseconds
    double sigma_log = 0.5;
};

/// Baseline latency family and fault degradation factors. Requests finish
/// within slo_ms under the service-level objective; requests are cut off at
/// timeout_ms.
struct LatencyModel {
    OpLatency base;
    std::optional<OpLatency> crwr, wrex, rmex;  // per-op overrides
    double slo_ms = 1000.0;
    double timeout_ms = 30000.0;
    double failover_multiplier = 3.0;
    // Multiplicative slowdown 1 + severity * scale for fail-slow faults.
    double p4_scale = 52.7;
    double p5_scale = 49.0;

    const OpLatency& params(OpKind op) const {
        switch (op) {
            case OpKind::CrWr: return crwr ? *crwr : base;
            case OpKind::WrEx: return wrex ? *wrex : base;
            case OpKind::RmEx: return rmex ? *rmex : base;
        }
        return base;
    }

    void validate() const {
        if (!(slo_ms < timeout_ms)) throw ConfigError("slo_ms must be below timeout_ms");
        if (!(base.sigma_log > 0)) throw ConfigError("latency sigma must be positive");
    }
};

}  // namespace storelens
