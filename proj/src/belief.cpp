// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/belief.hpp"

#include <algorithm>
#include <cmath>

namespace storelens {

HealthBelief beta_from_moments(double mean, double variance) {
    const double m = std::clamp(mean, 1e-9, 1.0 - 1e-9);
    if (!(variance > 0.0) || variance >= m * (1.0 - m)) {
        return {1.0, 1.0};  // over-dispersed: no Beta has these moments
    }
    const double strength = m * (1.0 - m) / variance - 1.0;
    return {m * strength, (1.0 - m) * strength};
}

std::map<ComponentId, HealthBelief> carry_forward(
    const std::map<ComponentId, HealthPosterior>& posteriors, double forgetting) {
    std::map<ComponentId, HealthBelief> next;
    for (const auto& [id, post] : posteriors) {
        HealthBelief b = beta_from_moments(post.mean, post.variance);
        b.alpha = forgetting * b.alpha + (1.0 - forgetting) * 1.0;
        b.beta = forgetting * b.beta + (1.0 - forgetting) * 1.0;
        next[id] = b;
    }
    return next;
}

std::set<ComponentId> flag_unhealthy(const std::map<ComponentId, HealthPosterior>& posteriors,
                                     double threshold_mean, int min_windows,
                                     std::map<ComponentId, int>& streaks) {
    std::set<ComponentId> flagged;
    for (const auto& [id, post] : posteriors) {
        if (post.mean < threshold_mean) {
            const int run = ++streaks[id];
            if (run >= min_windows) flagged.insert(id);
        } else {
            streaks.erase(id);
        }
    }
    return flagged;
}

}  // namespace storelens
