// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/fault.hpp"

#include "storelens/errors.hpp"
#include "storelens/latency.hpp"
#include "storelens/trace.hpp"

namespace storelens {

const char* fault_kind_name(FaultKind k) {
    switch (k) {
        case FaultKind::P1_FailStop: return "P1";
        case FaultKind::P2_ProcessCrash: return "P2";
        case FaultKind::P3_Gray: return "P3";
        case FaultKind::P4_FailSlowMasked: return "P4";
        case FaultKind::P5_Overload: return "P5";
    }
    return "?";
}

FaultKind parse_fault_kind(const std::string& name) {
    if (name == "P1") return FaultKind::P1_FailStop;
    if (name == "P2") return FaultKind::P2_ProcessCrash;
    if (name == "P3") return FaultKind::P3_Gray;
    if (name == "P4") return FaultKind::P4_FailSlowMasked;
    if (name == "P5") return FaultKind::P5_Overload;
    throw ConfigError("unknown fault kind: " + name);
}

const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::CrWr: return "CrWr";
        case OpKind::WrEx: return "WrEx";
        case OpKind::RmEx: return "RmEx";
    }
    return "?";
}

const char* flavor_name(ProbeFlavor f) {
    return f == ProbeFlavor::Memory ? "memory" : "disk";
}

const char* status_name(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::Ok: return "ok";
        case ProbeStatus::Slow: return "slow";
        case ProbeStatus::Timeout: return "timeout";
        case ProbeStatus::Error: return "error";
    }
    return "?";
}

}  // namespace storelens
