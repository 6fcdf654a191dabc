// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/diagnosis.hpp"

#include <algorithm>
#include <cmath>

#include "storelens/errors.hpp"
#include "storelens/lof.hpp"

namespace storelens {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Failure: return "failure";
        case Verdict::Overload: return "overload";
        case Verdict::Both: return "both";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

struct MetricView {
    const char* name;
    bool server_side;  // loadavg groups servers; await/util group OSDs
    std::optional<double> MetricSample::*field;
};

constexpr MetricView kMetricViews[] = {
    {"loadavg", true, &MetricSample::loadavg},
    {"await", false, &MetricSample::await_ms},
    {"utilization", false, &MetricSample::utilization},
};

bool in_group(const ComponentId& id, bool server_side) {
    if (server_side) return id.kind == Kind::DataServer || id.kind == Kind::Mds;
    return id.kind == Kind::Osd;
}

double median_of(std::vector<double> values) {
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2),
                     values.end());
    double hi = values[values.size() / 2];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(),
                     values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2 - 1), values.end());
    return 0.5 * (hi + values[values.size() / 2 - 1]);
}

}  // namespace

OverloadScan detect_overload(const std::vector<MetricSample>& metrics,
                             const std::set<ComponentId>& unhealthy, const DiagnosisConfig& cfg,
                             int window) {
    OverloadScan scan;
    for (const auto& view : kMetricViews) {
        // Window-mean metric per component of the homogeneous group.
        std::map<ComponentId, std::pair<double, int>> acc;
        for (const auto& s : metrics) {
            if (!in_group(s.component, view.server_side)) continue;
            const auto& value = s.*(view.field);
            if (!value) continue;
            auto& slot = acc[s.component];
            slot.first += *value;
            slot.second += 1;
        }
        if (acc.empty()) continue;

        std::vector<ComponentId> members;
        std::vector<double> values;
        for (const auto& [id, sum_count] : acc) {
            members.push_back(id);
            values.push_back(sum_count.first / sum_count.second);
        }

        const int k = std::max(cfg.lof_k_min,
                               static_cast<int>(std::ceil(cfg.lof_k_fraction * values.size())));
        if (values.size() < static_cast<std::size_t>(k) + 1) {
            for (const auto& id : unhealthy) {
                if (in_group(id, view.server_side)) {
                    scan.warnings.push_back(std::string("group too small for LOF on ") + view.name +
                                            ", skipped " + id.str());
                }
            }
            continue;
        }
        const std::vector<double> scores = lof(values, k);
        const double median = median_of(values);

        for (const auto& id : unhealthy) {
            if (!in_group(id, view.server_side)) continue;
            auto it = std::find(members.begin(), members.end(), id);
            if (it == members.end()) {
                scan.warnings.push_back(std::string("no ") + view.name + " samples for " + id.str() +
                                        ", skipped");
                continue;
            }
            const auto idx = static_cast<std::size_t>(it - members.begin());
            // Low-side outliers are idle, not overloaded.
            if (scores[idx] > cfg.lof_threshold && values[idx] > median) {
                scan.evidence.push_back({id, view.name, scores[idx], values[idx], k, window});
            }
        }
    }
    return scan;
}

std::vector<Diagnosis> attribute(const std::set<ComponentId>& unhealthy,
                                 const std::vector<OverloadEvidence>& overload_evidence,
                                 const std::vector<LogEvidence>& log_evidence) {
    std::vector<Diagnosis> out;
    for (const auto& id : unhealthy) {
        Diagnosis d;
        d.component = id;
        for (const auto& ev : overload_evidence) {
            if (ev.component == id) d.overload_evidence.push_back(ev);
        }
        for (const auto& ev : log_evidence) {
            if (ev.component == id && !ev.delta.empty()) {
                d.log_evidence = ev;
                break;
            }
        }
        const bool logs = d.log_evidence.has_value();
        const bool load = !d.overload_evidence.empty();
        d.verdict = logs && load ? Verdict::Both
                    : logs       ? Verdict::Failure
                    : load       ? Verdict::Overload
                                 : Verdict::Unknown;
        out.push_back(std::move(d));
    }
    return out;
}

DiagnoseOutcome diagnose_window(const Trace& trace, int window, int window_epochs,
                                const std::set<ComponentId>& unhealthy,
                                const LogNormalizer& normalizer, const DiagnosisConfig& cfg) {
    const int first = window * window_epochs;
    const int last = first + window_epochs;

    std::vector<MetricSample> metrics;
    for (const auto& m : trace.metrics) {
        if (m.epoch >= first && m.epoch < last) metrics.push_back(m);
    }
    std::vector<LogRecord> logs;
    for (const auto& l : trace.logs) {
        if (l.epoch >= first && l.epoch < last) logs.push_back(l);
    }

    DiagnoseOutcome out;
    OverloadScan scan = detect_overload(metrics, unhealthy, cfg, window);
    out.warnings = scan.warnings;

    // Template counts per component for the optional noise filter.
    std::map<ComponentId, std::map<std::string, int>> counts;
    for (const auto& l : logs) counts[l.component][normalizer.normalize(l.raw_text)]++;

    std::map<ComponentId, std::set<std::string>> templates = template_logs(logs, normalizer);

    std::vector<LogEvidence> log_ev;
    for (const auto& id : unhealthy) {
        auto own = templates.find(id);
        if (own == templates.end()) continue;
        std::vector<std::set<std::string>> healthy_sets;
        for (const auto& [peer, tset] : templates) {
            if (peer.kind == id.kind && peer != id && !unhealthy.count(peer)) {
                healthy_sets.push_back(tset);
            }
        }
        if (healthy_sets.empty()) {
            out.warnings.push_back("no healthy " + std::string(kind_prefix(id.kind)) +
                                   " peers to difference logs for " + id.str());
            continue;
        }
        std::set<std::string> own_templates = own->second;
        if (cfg.min_template_occurrence > 1) {
            for (auto it = own_templates.begin(); it != own_templates.end();) {
                if (counts[id][*it] < cfg.min_template_occurrence) it = own_templates.erase(it);
                else ++it;
            }
        }
        std::set<std::string> delta = log_delta(own_templates, healthy_sets);
        if (!delta.empty()) {
            log_ev.push_back({id, std::move(delta), static_cast<int>(healthy_sets.size())});
        }
    }

    out.diagnoses = attribute(unhealthy, scan.evidence, log_ev);
    return out;
}

}  // namespace storelens
