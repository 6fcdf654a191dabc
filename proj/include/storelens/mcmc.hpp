// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "storelens/factor_graph.hpp"

namespace storelens {

/// Component-wise Metropolis-within-Gibbs with logit-space Gaussian
/// proposals; step sizes adapt during burn-in only. Defaults fit the
/// 5-minute forensics cadence.
struct MCMCConfig {
    int chains = 4;
    int samples = 2500;  // kept per chain
    int burn_in = 1000;
    std::uint64_t seed = 1;
    double rhat_max = 1.1;
    double credible_low_q = 0.05;
    double credible_high_q = 0.95;
};

struct InferenceResult {
    std::map<ComponentId, HealthPosterior> posteriors;
    std::vector<std::string> warnings;  // non-convergence notes; result still valid
    bool converged = true;
};

/// Posterior health estimates for every variable in the graph. Unobserved
/// components come back with their prior mean and a full-width credible
/// interval. Deterministic for a fixed (graph, config) including seed.
InferenceResult infer(const FactorGraph& graph, const MCMCConfig& cfg);

}  // namespace storelens
