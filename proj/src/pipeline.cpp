// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include <json.hpp>

#include "storelens/belief.hpp"
#include "storelens/errors.hpp"
#include "storelens/rng.hpp"

namespace storelens {

using json = nlohmann::ordered_json;

std::vector<ComponentId> resolve_monitors(const Topology& topo, const MonitorConfig& cfg) {
    if (!cfg.explicit_monitors.empty()) {
        for (const auto& m : cfg.explicit_monitors) {
            if (m.kind != Kind::Client || !topo.contains(m)) {
                throw ConfigError("explicit monitor not in topology: " + m.str());
            }
        }
        return cfg.explicit_monitors;
    }
    return select_monitors(topo, topo.clients(), cfg.budget, cfg.k, cfg.identifiability_samples);
}

namespace {

Verdict expected_verdict(FaultKind k) {
    return k == FaultKind::P5_Overload ? Verdict::Overload : Verdict::Failure;
}

bool windows_overlap(const FaultSpec& f, int window, int window_epochs) {
    const int first = window * window_epochs;
    const int last = first + window_epochs - 1;
    return f.start_epoch <= last && f.end_epoch >= first;
}

}  // namespace

PipelineResult run_pipeline(const Topology& topo, const ProbePlan& plan,
                            const PipelineConfig& cfg, std::uint64_t seed) {
    PipelineResult result;
    result.trace = run_scenario(topo, cfg.scenario, plan, seed);

    const int window_epochs = plan.inference_window_epochs;
    const int windows =
        (cfg.scenario.horizon_epochs + window_epochs - 1) / window_epochs;

    LogNormalizer normalizer =
        cfg.rules_file ? LogNormalizer::from_file(*cfg.rules_file) : LogNormalizer();

    std::map<ComponentId, HealthBelief> priors;
    const HealthBelief default_prior{cfg.inference.prior_alpha, cfg.inference.prior_beta};
    std::map<ComponentId, int> streaks;

    for (int w = 0; w < windows; ++w) {
        const auto t0 = std::chrono::steady_clock::now();

        WindowResult wr;
        wr.window = w;
        AggregateResult agg = aggregate(result.trace, plan, w);
        FactorGraph graph = build_graph(topo, agg.observations, priors, default_prior);
        MCMCConfig mcfg = cfg.inference.mcmc;
        mcfg.seed = mix_seed(cfg.inference.mcmc.seed, 0x1FULL, static_cast<std::uint64_t>(w),
                             seed);
        wr.inference = infer(graph, mcfg);
        wr.flagged = flag_unhealthy(wr.inference.posteriors, cfg.inference.flag_threshold,
                                    cfg.inference.min_windows, streaks);
        wr.diagnosis = diagnose_window(result.trace, w, window_epochs, wr.flagged, normalizer,
                                       cfg.diagnosis);
        priors = carry_forward(wr.inference.posteriors, cfg.inference.forgetting);

        const auto t1 = std::chrono::steady_clock::now();
        result.score.window_wall_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
        result.windows.push_back(std::move(wr));
    }

    std::vector<WindowVerdicts> verdicts;
    for (const auto& wr : result.windows) {
        WindowVerdicts wv;
        wv.window = wr.window;
        wv.flagged = wr.flagged;
        for (const auto& d : wr.diagnosis.diagnoses) wv.verdicts[d.component] = d.verdict;
        verdicts.push_back(std::move(wv));
    }
    const auto wall = result.score.window_wall_ms;
    result.score = score_results(result.trace.truth, verdicts, window_epochs, cfg.scenario.id, seed);
    result.score.window_wall_ms = wall;
    return result;
}

ScoreReport score_results(const std::vector<InjectedFault>& truth,
                          const std::vector<WindowVerdicts>& windows, int window_epochs,
                          const std::string& scenario_id, std::uint64_t seed) {
    // TP: the fault's target was flagged in a window overlapping the fault.
    // FP: a component flagged in a window with no overlapping fault on it.
    // Faults with zero probe impact are out of recall scope.
    ScoreReport score;
    score.scenario_id = scenario_id;
    score.seed = seed;
    score.attribution_by_cause["failure"] = {0, 0};
    score.attribution_by_cause["overload"] = {0, 0};

    for (const auto& injected : truth) {
        if (injected.impacted_probes == 0) continue;
        score.in_scope_faults++;
        const FaultSpec& f = injected.fault;
        bool found = false;
        bool attributed = false;
        for (const auto& wv : windows) {
            if (!windows_overlap(f, wv.window, window_epochs)) continue;
            if (!wv.flagged.count(f.target)) continue;
            found = true;
            auto it = wv.verdicts.find(f.target);
            if (it != wv.verdicts.end() && it->second == expected_verdict(f.kind)) {
                attributed = true;
            }
        }
        const char* cause = f.kind == FaultKind::P5_Overload ? "overload" : "failure";
        if (found) {
            score.true_positives++;
            auto& slot = score.attribution_by_cause[cause];
            if (attributed) {
                slot.first++;
                score.attribution_correct++;
            } else {
                slot.second++;
                score.attribution_incorrect++;
            }
        } else {
            score.false_negatives++;
            score.missed_targets.push_back(f.target);
        }
    }

    std::set<ComponentId> fp_components;
    for (const auto& wv : windows) {
        for (const auto& c : wv.flagged) {
            bool excused = false;
            for (const auto& injected : truth) {
                if (injected.fault.target == c &&
                    windows_overlap(injected.fault, wv.window, window_epochs)) {
                    excused = true;
                    break;
                }
            }
            if (!excused) fp_components.insert(c);
        }
    }
    score.false_positives = static_cast<int>(fp_components.size());
    score.false_positive_components.assign(fp_components.begin(), fp_components.end());
    return score;
}

std::vector<HeatmapMatrix> emit_heatmap(const Trace& trace, const ProbePlan& plan,
                                        const Topology& topo, int window) {
    const int window_epochs = plan.inference_window_epochs;
    const int first = window * window_epochs;
    const int last = first + window_epochs;

    bool any = false;
    std::map<std::pair<ComponentId, ComponentId>, std::pair<int, int>> counts;  // (miss, total)
    for (const auto& p : trace.probes) {
        if (p.epoch < first || p.epoch >= last) continue;
        any = true;
        if (p.op != OpKind::WrEx || p.flavor != ProbeFlavor::Memory) continue;
        auto& slot = counts[{p.monitor, p.target}];
        slot.second++;
        if (p.status != ProbeStatus::Ok) slot.first++;
    }
    if (!any) throw EmptyWindowError("no probe records in window " + std::to_string(window));

    std::vector<HeatmapMatrix> matrices;
    for (int d = 0; d < topo.num_domains(); ++d) {
        HeatmapMatrix m;
        m.window = window;
        m.domain = d;
        m.rows = plan.monitors;
        for (const auto& ds : topo.data_servers()) {
            if (topo.domain_of(ds) == d) m.cols.push_back(ds);
        }
        m.cells.assign(m.rows.size(), std::vector<double>(m.cols.size(), 0.0));
        m.denominators.assign(m.rows.size(), std::vector<int>(m.cols.size(), 0));
        for (std::size_t r = 0; r < m.rows.size(); ++r) {
            for (std::size_t c = 0; c < m.cols.size(); ++c) {
                auto it = counts.find({m.rows[r], m.cols[c]});
                if (it == counts.end() || it->second.second == 0) continue;
                m.denominators[r][c] = it->second.second;
                m.cells[r][c] =
                    static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
            }
        }
        matrices.push_back(std::move(m));
    }
    return matrices;
}

void write_heatmap_csv(const HeatmapMatrix& m, std::ostream& out) {
    out << "monitor";
    for (const auto& c : m.cols) out << ',' << c.str();
    out << '\n';
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        out << m.rows[r].str();
        for (std::size_t c = 0; c < m.cols.size(); ++c) {
            out << ',' << m.cells[r][c];
        }
        out << '\n';
    }
}

std::vector<FaultSpec> generate_faults(const Topology& topo, const FaultMix& mix,
                                       std::uint64_t seed) {
    auto rng = substream(seed, 0xFAULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto pool_of = [&topo](FaultKind k) {
        std::vector<ComponentId> pool;
        auto add = [&pool](std::vector<ComponentId> v) {
            pool.insert(pool.end(), v.begin(), v.end());
        };
        switch (k) {
            case FaultKind::P1_FailStop:
                add(topo.data_servers());
                add(topo.mds_servers());
                add(topo.osds());
                break;
            case FaultKind::P2_ProcessCrash:
                add(topo.data_servers());
                add(topo.mds_servers());
                break;
            case FaultKind::P3_Gray:
                add(topo.osds());
                add(topo.mds_servers());
                break;
            case FaultKind::P4_FailSlowMasked:
                add(topo.osds());
                break;
            case FaultKind::P5_Overload:
                add(topo.osds());
                add(topo.mds_servers());
                break;
        }
        return pool;
    };
    auto severity_of = [&unif, &rng](FaultKind k) {
        switch (k) {
            case FaultKind::P1_FailStop:
            case FaultKind::P2_ProcessCrash: return 1.0;
            case FaultKind::P3_Gray: return 0.5 + 0.5 * unif(rng);
            case FaultKind::P4_FailSlowMasked: return 0.7 + 0.3 * unif(rng);
            case FaultKind::P5_Overload: return 0.8 + 0.2 * unif(rng);
        }
        return 1.0;
    };

    std::set<ComponentId> used;
    std::vector<FaultSpec> faults;
    auto draw_one = [&](FaultKind k) {
        const auto pool = pool_of(k);
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const auto& target = pool[static_cast<std::size_t>(rng() % pool.size())];
            if (used.count(target)) continue;
            used.insert(target);
            faults.push_back({k, target, mix.start_epoch, mix.end_epoch, severity_of(k)});
            return;
        }
        throw ConfigError("could not draw a distinct fault target; pool exhausted");
    };

    constexpr FaultKind kFailureKinds[] = {FaultKind::P1_FailStop, FaultKind::P2_ProcessCrash,
                                           FaultKind::P3_Gray, FaultKind::P4_FailSlowMasked};
    for (int i = 0; i < mix.failures; ++i) draw_one(kFailureKinds[rng() % 4]);
    for (int i = 0; i < mix.overloads; ++i) draw_one(FaultKind::P5_Overload);
    return faults;
}

void write_posteriors(const std::vector<WindowResult>& windows, double flag_threshold,
                      std::ostream& out) {
    for (const auto& wr : windows) {
        for (const auto& [id, p] : wr.inference.posteriors) {
            json j{{"window", wr.window},
                   {"component", id.str()},
                   {"mean", p.mean},
                   {"credible_low", p.credible_low},
                   {"credible_high", p.credible_high},
                   {"variance", p.variance},
                   {"effective_samples", p.effective_samples},
                   {"observed", p.observed},
                   {"flagged", wr.flagged.count(id) > 0},
                   {"threshold", flag_threshold}};
            out << j.dump() << '\n';
        }
    }
}

void write_diagnoses(const std::vector<WindowResult>& windows, std::ostream& out) {
    for (const auto& wr : windows) {
        for (const auto& d : wr.diagnosis.diagnoses) {
            json j{{"window", wr.window},
                   {"component", d.component.str()},
                   {"verdict", verdict_name(d.verdict)}};
            if (d.log_evidence) {
                j["log_delta"] = json::array();
                for (const auto& t : d.log_evidence->delta) j["log_delta"].push_back(t);
                j["healthy_peers"] = d.log_evidence->peers;
            }
            if (!d.overload_evidence.empty()) {
                j["overload"] = json::array();
                for (const auto& ev : d.overload_evidence) {
                    j["overload"].push_back(json{{"metric", ev.metric},
                                                 {"lof", ev.lof_score},
                                                 {"value", ev.value},
                                                 {"k", ev.k}});
                }
            }
            out << j.dump() << '\n';
        }
    }
}

void write_score(const ScoreReport& score, std::ostream& out) {
    json j{{"scenario", score.scenario_id},
           {"seed", score.seed},
           {"localization",
            json{{"in_scope_faults", score.in_scope_faults},
                 {"true_positives", score.true_positives},
                 {"false_negatives", score.false_negatives},
                 {"false_positives", score.false_positives}}},
           {"attribution",
            json{{"correct", score.attribution_correct},
                 {"incorrect", score.attribution_incorrect}}},
           {"window_wall_ms", score.window_wall_ms}};
    for (const auto& [cause, counts] : score.attribution_by_cause) {
        j["attribution"][cause] = json{{"correct", counts.first}, {"incorrect", counts.second}};
    }
    j["false_positive_components"] = json::array();
    for (const auto& c : score.false_positive_components) {
        j["false_positive_components"].push_back(c.str());
    }
    j["missed_targets"] = json::array();
    for (const auto& c : score.missed_targets) j["missed_targets"].push_back(c.str());
    out << j.dump(2) << '\n';
}

}  // namespace storelens
