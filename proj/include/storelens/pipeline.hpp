// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "storelens/diagnosis.hpp"
#include "storelens/mcmc.hpp"
#include "storelens/observation.hpp"
#include "storelens/probe_plan.hpp"
#include "storelens/scenario.hpp"
#include "storelens/simulator.hpp"

namespace storelens {

struct MonitorConfig {
    int budget = 6;
    int k = 1;
    std::size_t identifiability_samples = 200000;
    std::vector<ComponentId> explicit_monitors;  // skips selection when set
};

struct InferenceConfig {
    MCMCConfig mcmc;
    double prior_alpha = 4.75;  // mean 0.95: healthy until evidenced otherwise
    double prior_beta = 0.25;
    double flag_threshold = 0.9;
    int min_windows = 1;
    double forgetting = 0.9;
};

struct PipelineConfig {
    TopologySpec topology;
    MonitorConfig monitors;
    int interval_s = 60;
    int window_epochs = 5;
    Scenario scenario;
    InferenceConfig inference;
    DiagnosisConfig diagnosis;
    std::optional<std::string> rules_file;
};

/// Localization and attribution quality against the injected ground truth.
struct ScoreReport {
    std::string scenario_id;
    std::uint64_t seed = 0;
    int in_scope_faults = 0;  // injected faults with probe-visible impact
    int true_positives = 0;
    int false_negatives = 0;
    int false_positives = 0;
    int attribution_correct = 0;
    int attribution_incorrect = 0;
    std::map<std::string, std::pair<int, int>> attribution_by_cause;  // cause -> {correct, incorrect}
    std::vector<ComponentId> false_positive_components;
    std::vector<ComponentId> missed_targets;
    std::vector<double> window_wall_ms;
};

struct WindowResult {
    int window = 0;
    InferenceResult inference;
    std::set<ComponentId> flagged;
    DiagnoseOutcome diagnosis;
};

struct PipelineResult {
    Trace trace;
    std::vector<WindowResult> windows;
    ScoreReport score;
};

/// Per-window verdict view used for scoring (also reconstructible from the
/// posteriors/diagnosis files).
struct WindowVerdicts {
    int window = 0;
    std::set<ComponentId> flagged;
    std::map<ComponentId, Verdict> verdicts;
};

ScoreReport score_results(const std::vector<InjectedFault>& truth,
                          const std::vector<WindowVerdicts>& windows, int window_epochs,
                          const std::string& scenario_id, std::uint64_t seed);

/// Monitor selection honoring explicit overrides.
std::vector<ComponentId> resolve_monitors(const Topology& topo, const MonitorConfig& cfg);

/// Full monitor -> inference -> diagnosis pipeline over every window of the
/// scenario, scored against the ground-truth sidecar. Deterministic for a
/// fixed (config, seed).
PipelineResult run_pipeline(const Topology& topo, const ProbePlan& plan,
                            const PipelineConfig& cfg, std::uint64_t seed);

/// Client x server failure-ratio heatmap over server-memory WrEx probes,
/// one matrix per filesystem domain. Cell = fraction of the pair's probes
/// in the window that missed the SLO. Throws EmptyWindowError when the
/// window has no probe records.
struct HeatmapMatrix {
    int window = 0;
    int domain = 0;
    std::vector<ComponentId> rows;  // monitors
    std::vector<ComponentId> cols;  // data servers of the domain
    std::vector<std::vector<double>> cells;
    std::vector<std::vector<int>> denominators;
};

std::vector<HeatmapMatrix> emit_heatmap(const Trace& trace, const ProbePlan& plan,
                                        const Topology& topo, int window);
void write_heatmap_csv(const HeatmapMatrix& m, std::ostream& out);

/// Batch fault generator for simulation studies. Picks distinct targets
/// from per-kind pools chosen so every fault has probe-visible impact.
struct FaultMix {
    int failures = 1;   // kinds drawn from P1..P4
    int overloads = 1;  // P5
    int start_epoch = 0;
    int end_epoch = 4;
};
std::vector<FaultSpec> generate_faults(const Topology& topo, const FaultMix& mix,
                                       std::uint64_t seed);

/// Line-delimited per-window outputs.
void write_posteriors(const std::vector<WindowResult>& windows, double flag_threshold,
                      std::ostream& out);
void write_diagnoses(const std::vector<WindowResult>& windows, std::ostream& out);
void write_score(const ScoreReport& score, std::ostream& out);

}  // namespace storelens
