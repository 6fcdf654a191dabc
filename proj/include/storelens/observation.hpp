// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "storelens/probe_plan.hpp"
#include "storelens/trace.hpp"

namespace storelens {

/// Binomial evidence for one (monitor, target) path over an inference
/// window: N probes observed, Y of them within the SLO.
struct PathObservation {
    ComponentId monitor;
    ComponentId target;
    int window = 0;
    int probes_sent = 0;  // N
    int successes = 0;    // Y
};

struct AggregateResult {
    std::vector<PathObservation> observations;
    /// Planned pairs with no records at all in the window (N=0).
    std::vector<std::pair<ComponentId, ComponentId>> missing_pairs;
};

/// Folds one window of probe records into per-path observations. N comes
/// from the records actually present (never fabricated); a record counts as
/// a success when its latency met the SLO. Every record lands in exactly
/// one observation.
AggregateResult aggregate(const Trace& trace, const ProbePlan& plan, int window);

}  // namespace storelens
