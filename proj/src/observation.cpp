// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/observation.hpp"

#include <map>

#include "storelens/errors.hpp"

namespace storelens {

AggregateResult aggregate(const Trace& trace, const ProbePlan& plan, int window) {
    if (window < 0) throw ConfigError("window index must be non-negative");
    const int w = plan.inference_window_epochs;
    const int first = window * w;
    const int last = first + w;  // exclusive

    std::map<std::pair<ComponentId, ComponentId>, PathObservation> by_pair;
    for (const auto& p : trace.probes) {
        if (p.epoch < first || p.epoch >= last) continue;
        auto key = std::make_pair(p.monitor, p.target);
        auto [it, inserted] = by_pair.try_emplace(key);
        if (inserted) {
            it->second.monitor = p.monitor;
            it->second.target = p.target;
            it->second.window = window;
        }
        it->second.probes_sent++;
        if (p.status == ProbeStatus::Ok && p.latency_ms <= trace.slo_ms) it->second.successes++;
    }

    AggregateResult out;
    out.observations.reserve(by_pair.size());
    for (auto& [key, obs] : by_pair) out.observations.push_back(obs);

    for (const auto& m : plan.monitors) {
        std::map<ComponentId, bool> seen;
        for (const auto& e : plan.entries) {
            if (e.monitor == m) seen.emplace(e.target, false);
        }
        for (auto& [target, covered] : seen) {
            covered = by_pair.count({m, target}) > 0;
            if (!covered) out.missing_pairs.emplace_back(m, target);
        }
    }
    return out;
}

}  // namespace storelens
