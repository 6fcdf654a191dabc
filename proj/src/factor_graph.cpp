// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/factor_graph.hpp"

#include "storelens/errors.hpp"

namespace storelens {

double path_availability(const ProbePath& path, const std::map<ComponentId, double>& healths) {
    auto health = [&healths](const ComponentId& id) {
        auto it = healths.find(id);
        if (it == healths.end()) throw NotFoundError("no health for component: " + id.str());
        return it->second;
    };
    double a = 1.0;
    for (const auto& s : path.serial) a *= health(s);
    for (const auto& g : path.groups) {
        double miss = 1.0;
        for (const auto& m : g) miss *= 1.0 - health(m);
        a *= 1.0 - miss;
    }
    return a * health(path.target);
}

std::vector<ComponentId> FactorGraph::unobserved() const {
    std::vector<ComponentId> out;
    for (std::size_t v = 0; v < variables.size(); ++v) {
        if (var_factors[v].empty()) out.push_back(variables[v]);
    }
    return out;
}

FactorGraph build_graph(const Topology& topo, const std::vector<PathObservation>& observations,
                        const std::map<ComponentId, HealthBelief>& priors,
                        HealthBelief default_prior) {
    FactorGraph g;
    g.variables = topo.components();
    for (std::size_t i = 0; i < g.variables.size(); ++i) {
        g.index[g.variables[i]] = static_cast<int>(i);
        auto it = priors.find(g.variables[i]);
        const HealthBelief& b = it == priors.end() ? default_prior : it->second;
        g.prior_alpha.push_back(b.alpha);
        g.prior_beta.push_back(b.beta);
    }
    g.var_factors.assign(g.variables.size(), {});

    for (const auto& obs : observations) {
        if (obs.probes_sent <= 0) {
            g.warnings.push_back("skipped observation with no probes: " + obs.monitor.str() + "->" +
                                 obs.target.str());
            continue;
        }
        ProbePath path = topo.enumerate_path(obs.monitor, obs.target);
        ObservationFactor f;
        f.probes_sent = obs.probes_sent;
        f.successes = obs.successes;
        for (const auto& s : path.serial) f.path.serial.push_back(g.index.at(s));
        for (const auto& grp : path.groups) {
            std::vector<int> ids;
            ids.reserve(grp.size());
            for (const auto& m : grp) ids.push_back(g.index.at(m));
            f.path.groups.push_back(std::move(ids));
        }
        f.path.target = g.index.at(path.target);

        const int fid = static_cast<int>(g.factors.size());
        for (int v : f.path.serial) g.var_factors[static_cast<std::size_t>(v)].push_back(fid);
        for (const auto& grp : f.path.groups) {
            for (int v : grp) g.var_factors[static_cast<std::size_t>(v)].push_back(fid);
        }
        g.var_factors[static_cast<std::size_t>(f.path.target)].push_back(fid);
        g.factors.push_back(std::move(f));
    }
    return g;
}

}  // namespace storelens
