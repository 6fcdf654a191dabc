// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/probe_plan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "storelens/errors.hpp"
#include "storelens/rng.hpp"

namespace storelens {

std::size_t ProbePlan::count_of(OpKind op) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [op](const ProbeEntry& e) { return e.op == op; }));
}

ProbePlan plan_probes(const Topology& topo, const std::vector<ComponentId>& monitors,
                      int interval_s, int inference_window_epochs) {
    for (const auto& m : monitors) {
        if (m.kind != Kind::Client || !topo.contains(m)) {
            throw NotFoundError("monitor is not a client of this topology: " + m.str());
        }
    }
    ProbePlan plan;
    plan.monitors = monitors;
    std::sort(plan.monitors.begin(), plan.monitors.end());
    plan.interval_s = interval_s;
    plan.inference_window_epochs = inference_window_epochs;

    // Metadata ops exercise each MDS's memory path and its disk path.
    for (OpKind op : {OpKind::CrWr, OpKind::RmEx}) {
        for (const auto& m : plan.monitors) {
            for (const auto& mds : topo.mds_servers()) {
                plan.entries.push_back({m, mds, op, ProbeFlavor::Memory});
                plan.entries.push_back({m, mds, op, ProbeFlavor::Disk});
            }
        }
    }
    // WrEx probes every data server's memory path and every OSD's disk path.
    for (const auto& m : plan.monitors) {
        for (const auto& ds : topo.data_servers()) {
            plan.entries.push_back({m, ds, OpKind::WrEx, ProbeFlavor::Memory});
        }
        for (const auto& osd : topo.osds()) {
            plan.entries.push_back({m, osd, OpKind::WrEx, ProbeFlavor::Disk});
        }
    }
    return plan;
}

namespace {

std::string witness_text(const IdentifiabilityResult& res) {
    std::ostringstream os;
    if (res.witness) {
        os << "witness v=" << res.witness->first.str() << " F={";
        bool first = true;
        for (const auto& f : res.witness->second) {
            if (!first) os << ",";
            os << f.str();
            first = false;
        }
        os << "}";
    }
    return os.str();
}

}  // namespace

std::vector<ComponentId> select_monitors(const Topology& topo,
                                         const std::vector<ComponentId>& candidates, int budget,
                                         int k, std::size_t sample_budget) {
    if (candidates.empty()) throw InfeasibleError("no monitor candidates");
    if (budget < 1) throw InfeasibleError("monitor budget must be at least 1");
    for (const auto& c : candidates) {
        if (c.kind != Kind::Client || !topo.contains(c)) {
            throw NotFoundError("candidate is not a client of this topology: " + c.str());
        }
    }

    std::map<ClientClass, std::vector<ComponentId>> by_class;
    for (const auto& c : candidates) by_class[topo.client_class(c)].push_back(c);
    for (auto& [cls, list] : by_class) std::sort(list.begin(), list.end());

    // Login nodes are the fixed user vantage points; the other classes each
    // contribute one node so the monitoring fabric spans every network and
    // survives a client loss.
    std::set<ComponentId> picked;
    if (auto it = by_class.find(ClientClass::Login); it != by_class.end()) {
        for (const auto& c : it->second) {
            if (static_cast<int>(picked.size()) >= budget) break;
            picked.insert(c);
        }
    }
    for (ClientClass cls : {ClientClass::Service, ClientClass::ImportExport, ClientClass::Generic}) {
        auto it = by_class.find(cls);
        if (it == by_class.end() || static_cast<int>(picked.size()) >= budget) continue;
        const auto& list = it->second;
        const auto choice =
            list[static_cast<std::size_t>(mix_seed(topo.seed(), 0x5EULL, static_cast<std::uint64_t>(cls)) %
                                          list.size())];
        picked.insert(choice);
    }
    if (picked.empty()) picked.insert(by_class.begin()->second.front());

    std::vector<ComponentId> monitors(picked.begin(), picked.end());

    // Greedy coverage top-up: spend the remaining budget on candidates
    // covering the most still-uncovered components (ties by index), so the
    // monitoring fabric itself has spares.
    while (static_cast<int>(monitors.size()) < budget &&
           picked.size() < candidates.size()) {
        std::set<ComponentId> covered;
        for (const auto& m : monitors) {
            for (const auto& t : topo.probe_targets()) {
                for (const auto& c : topo.enumerate_path(m, t).components()) covered.insert(c);
            }
        }
        const ComponentId* best = nullptr;
        std::size_t best_gain = 0;
        for (const auto& c : candidates) {
            if (picked.count(c)) continue;
            std::size_t gain = 0;
            for (const auto& t : topo.probe_targets()) {
                for (const auto& pc : topo.enumerate_path(c, t).components()) {
                    if (!covered.count(pc)) ++gain;
                }
            }
            if (!best || gain > best_gain) {
                best = &c;
                best_gain = gain;
            }
        }
        if (!best) break;
        picked.insert(*best);
        monitors.assign(picked.begin(), picked.end());
    }

    IdentifiabilityResult res = check_identifiability(topo, monitors, k, sample_budget);
    if (!res.identifiable) {
        throw InfeasibleError("monitor budget " + std::to_string(budget) +
                              " cannot satisfy identifiability for k=" + std::to_string(k) + "; " +
                              witness_text(res));
    }
    return monitors;
}

}  // namespace storelens
