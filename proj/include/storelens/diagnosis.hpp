// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "storelens/log_template.hpp"
#include "storelens/trace.hpp"

namespace storelens {

enum class Verdict : std::uint8_t { Failure, Overload, Both, Unknown };

const char* verdict_name(Verdict v);

struct OverloadEvidence {
    ComponentId component;
    std::string metric;  // loadavg | await | utilization
    double lof_score = 0.0;
    double value = 0.0;
    int k = 0;
    int window = 0;
};

struct LogEvidence {
    ComponentId component;
    std::set<std::string> delta;  // templates unique to the unhealthy component
    int peers = 0;                // healthy comparison-group size
};

struct Diagnosis {
    ComponentId component;
    Verdict verdict{Verdict::Unknown};
    std::optional<LogEvidence> log_evidence;
    std::vector<OverloadEvidence> overload_evidence;
};

struct DiagnosisConfig {
    double lof_threshold = 1.5;
    int lof_k_min = 5;
    double lof_k_fraction = 0.10;  // k = max(k_min, ceil(fraction * group))
    int min_template_occurrence = 0;  // 0 disables the noise filter
};

/// LOF evidence for each unhealthy component whose window-mean metric is an
/// outlier on the high side of its homogeneous group (loadavg over data and
/// metadata servers; await and utilization over OSDs). Components without
/// metrics, or groups too small for k+1 points, are skipped with a warning.
struct OverloadScan {
    std::vector<OverloadEvidence> evidence;
    std::vector<std::string> warnings;
};
OverloadScan detect_overload(const std::vector<MetricSample>& metrics,
                             const std::set<ComponentId>& unhealthy, const DiagnosisConfig& cfg,
                             int window);

/// Failure iff only log evidence, Overload iff only metric evidence, Both
/// iff both, Unknown otherwise. Every unhealthy component gets exactly one
/// verdict.
std::vector<Diagnosis> attribute(const std::set<ComponentId>& unhealthy,
                                 const std::vector<OverloadEvidence>& overload_evidence,
                                 const std::vector<LogEvidence>& log_evidence);

/// Full per-window diagnosis: log differencing against healthy same-kind
/// peers plus the LOF scan.
struct DiagnoseOutcome {
    std::vector<Diagnosis> diagnoses;
    std::vector<std::string> warnings;
};
DiagnoseOutcome diagnose_window(const Trace& trace, int window, int window_epochs,
                                const std::set<ComponentId>& unhealthy,
                                const LogNormalizer& normalizer, const DiagnosisConfig& cfg);

}  // namespace storelens
