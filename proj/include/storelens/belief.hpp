// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>

#include "storelens/component.hpp"

namespace storelens {

/// Beta(alpha, beta) belief over a component's health X in (0,1).
struct HealthBelief {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
    double variance() const {
        const double s = alpha + beta;
        return alpha * beta / (s * s * (s + 1.0));
    }
};

/// Posterior summary for one component after a window's inference.
struct HealthPosterior {
    ComponentId component;
    double mean = 0.5;
    double variance = 1.0 / 12.0;
    double credible_low = 0.0;   // 5th percentile
    double credible_high = 1.0;  // 95th percentile
    long effective_samples = 0;
    bool observed = false;  // had at least one attached observation factor
};

/// Moment-matches each posterior back to a Beta prior for the next window,
/// then shrinks it toward Beta(1,1) by the forgetting factor to keep old
/// evidence from freezing a component's status. Over-dispersed posteriors
/// (variance >= m(1-m)) fall back to Beta(1,1).
std::map<ComponentId, HealthBelief> carry_forward(
    const std::map<ComponentId, HealthPosterior>& posteriors, double forgetting = 0.9);

/// Moment-matching for a single (mean, variance) pair; exposed for tests.
HealthBelief beta_from_moments(double mean, double variance);

/// Components whose posterior mean sat below the threshold for at least
/// `min_windows` consecutive windows. `streaks` carries the consecutive
/// count across calls (one entry per currently-below component).
std::set<ComponentId> flag_unhealthy(const std::map<ComponentId, HealthPosterior>& posteriors,
                                     double threshold_mean, int min_windows,
                                     std::map<ComponentId, int>& streaks);

}  // namespace storelens
