// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "storelens/latency.hpp"
#include "storelens/topology.hpp"

namespace storelens {

struct ProbeEntry {
    ComponentId monitor;
    ComponentId target;
    OpKind op{OpKind::WrEx};
    ProbeFlavor flavor{ProbeFlavor::Disk};
};

/// The per-epoch probe schedule. Each (monitor, MDS) pair gets a memory and
/// a disk CrWr plus the same for RmEx; each (monitor, data server) gets a
/// server-memory WrEx and each (monitor, OSD) a disk WrEx.
struct ProbePlan {
    std::vector<ComponentId> monitors;
    int interval_s = 60;
    int inference_window_epochs = 5;
    std::vector<ProbeEntry> entries;  // one epoch worth, in emission order

    std::size_t per_epoch() const { return entries.size(); }
    std::size_t count_of(OpKind op) const;
};

/// Builds the schedule for the given monitors. Probe counts per epoch:
/// CrWr = RmEx = 2 * |monitors| * |MDS|, WrEx = |monitors| * (|DS| + |OSD|).
ProbePlan plan_probes(const Topology& topo, const std::vector<ComponentId>& monitors,
                      int interval_s = 60, int inference_window_epochs = 5);

/// Picks up to `budget` monitors from the candidates such that
/// check_identifiability(topo, monitors, k) holds. All login-class
/// candidates are anchored first (they are the fixed user vantage points),
/// then one seed-deterministic candidate per remaining class, then greedy
/// coverage top-up while the check still fails. Throws InfeasibleError with
/// the smallest failing witness when the budget cannot satisfy the check.
std::vector<ComponentId> select_monitors(const Topology& topo,
                                         const std::vector<ComponentId>& candidates, int budget,
                                         int k, std::size_t sample_budget = 200000);

}  // namespace storelens
