// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "storelens/belief.hpp"
#include "storelens/observation.hpp"
#include "storelens/topology.hpp"

namespace storelens {

/// Availability of one probe path given per-component healths: the product
/// of serial healths, one redundancy term 1 - prod(1 - X_j) per group, and
/// the target health. Throws NotFoundError when a health is missing.
double path_availability(const ProbePath& path, const std::map<ComponentId, double>& healths);

/// A path's structure resolved to variable indices for fast evaluation.
struct PathExpr {
    std::vector<int> serial;
    std::vector<std::vector<int>> groups;
    int target = -1;

    double availability(std::span<const double> x) const {
        double a = 1.0;
        for (int v : serial) a *= x[static_cast<std::size_t>(v)];
        for (const auto& g : groups) {
            double miss = 1.0;
            for (int v : g) miss *= 1.0 - x[static_cast<std::size_t>(v)];
            a *= 1.0 - miss;
        }
        return a * x[static_cast<std::size_t>(target)];
    }
};

/// Binomial observation factor: Y successes out of N probes on one path.
struct ObservationFactor {
    PathExpr path;
    int probes_sent = 0;
    int successes = 0;
};

/// Factor graph over component healths: one Beta singleton per component,
/// one Binomial factor per path observation.
struct FactorGraph {
    std::vector<ComponentId> variables;
    std::map<ComponentId, int> index;
    std::vector<double> prior_alpha;
    std::vector<double> prior_beta;
    std::vector<ObservationFactor> factors;
    std::vector<std::vector<int>> var_factors;  // variable -> attached factor ids
    std::vector<std::string> warnings;          // skipped observations etc.

    bool observed(int var) const { return !var_factors[static_cast<std::size_t>(var)].empty(); }
    std::vector<ComponentId> unobserved() const;
};

/// Builds the graph for one window. Observations with N=0 are skipped with
/// a warning. Components carry the supplied prior, or `default_prior` when
/// absent from the map.
FactorGraph build_graph(const Topology& topo, const std::vector<PathObservation>& observations,
                        const std::map<ComponentId, HealthBelief>& priors,
                        HealthBelief default_prior = {});

}  // namespace storelens
