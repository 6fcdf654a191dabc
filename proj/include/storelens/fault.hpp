// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "storelens/component.hpp"

namespace storelens {

/// Fault patterns injected by the simulator:
///  P1 fail-stop of a whole component, P2 fail-stop of its service process,
///  P3 gray failure (visible to probes, invisible to heartbeats),
///  P4 fail-slow masked by redundancy (e.g. RAID rebuild),
///  P5 slowdown from resource overload.
enum class FaultKind : std::uint8_t {
    P1_FailStop,
    P2_ProcessCrash,
    P3_Gray,
    P4_FailSlowMasked,
    P5_Overload,
};

const char* fault_kind_name(FaultKind k);
FaultKind parse_fault_kind(const std::string& name);

/// Whether the failure detectors (heartbeats / HA agents) see the fault.
/// Detected faults trigger failover; gray and slow faults do not.
inline bool fault_detected(FaultKind k) {
    return k == FaultKind::P1_FailStop || k == FaultKind::P2_ProcessCrash;
}

struct FaultSpec {
    FaultKind kind{FaultKind::P1_FailStop};
    ComponentId target;
    int start_epoch = 0;
    int end_epoch = 0;  // inclusive
    double severity = 1.0;  // failure probability per traversing request, or load factor

    bool active_at(int epoch) const { return epoch >= start_epoch && epoch <= end_epoch; }
};

}  // namespace storelens
