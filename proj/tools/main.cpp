// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0
//
// Probe-based health monitoring, localization and root-cause triage for a
// simulated distributed storage cluster.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "storelens/belief.hpp"
#include "storelens/config.hpp"
#include "storelens/errors.hpp"
#include "storelens/pipeline.hpp"
#include "storelens/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace storelens;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string scale = "ci";
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int windows = 0;  // 0 keeps the config horizon
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--scale", opts.scale, "topology preset: ci or full")
        ->check(CLI::IsMember({"ci", "full"}));
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "run seed");
    cmd->add_option("--windows", opts.windows, "scenario length in inference windows");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg = opts.scale == "full" ? full_scale_config() : ci_scale_config();
    if (!opts.config_path.empty()) cfg = load_config(opts.config_path, std::move(cfg));
    if (opts.windows > 0) cfg.scenario.horizon_epochs = opts.windows * cfg.window_epochs;
    for (auto& f : cfg.scenario.faults) {
        f.end_epoch = std::min(f.end_epoch, cfg.scenario.horizon_epochs - 1);
    }
    return cfg;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

struct Stack {
    PipelineConfig cfg;
    Topology topo;
    std::vector<ComponentId> monitors;
    ProbePlan plan;
};

Stack build_stack(const CommonOpts& opts) {
    Stack s{resolve_config(opts), Topology::build({}), {}, {}};
    s.topo = Topology::build(s.cfg.topology);
    s.monitors = resolve_monitors(s.topo, s.cfg.monitors);
    s.plan = plan_probes(s.topo, s.monitors, s.cfg.interval_s, s.cfg.window_epochs);
    return s;
}

Trace load_trace(const fs::path& dir) {
    std::ifstream in(dir / "trace.jsonl");
    if (!in) throw ConfigError("no trace.jsonl under " + dir.string() + "; run `sim run` first");
    return read_trace(in);
}

int cmd_topo_gen(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    fs::create_directories(opts.out_dir);
    json j{{"components", json::array()},
           {"ha_pairs", json::array()},
           {"domains", json::array()},
           {"monitors", json::array()},
           {"lnet_group_size", s.topo.lnet_group_size()},
           {"seed", s.topo.seed()}};
    for (const auto& c : s.topo.components()) j["components"].push_back(c.str());
    for (const auto& [a, b] : s.topo.ha_pairs()) j["ha_pairs"].push_back(json::array({a.str(), b.str()}));
    for (int d = 0; d < s.topo.num_domains(); ++d) {
        json dom{{"mds", s.topo.domain_mds(d).str()}, {"data_servers", json::array()}};
        for (const auto& ds : s.topo.data_servers()) {
            if (s.topo.domain_of(ds) == d) dom["data_servers"].push_back(ds.str());
        }
        j["domains"].push_back(dom);
    }
    for (const auto& m : s.monitors) j["monitors"].push_back(m.str());
    auto out = open_out(fs::path(opts.out_dir) / "topology.json");
    out << j.dump(2) << '\n';
    std::cout << "wrote " << (fs::path(opts.out_dir) / "topology.json").string() << " ("
              << s.topo.components().size() << " components, " << s.topo.ha_pairs().size()
              << " HA pairs, " << s.monitors.size() << " monitors)\n";
    return 0;
}

int cmd_sim_run(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    Trace trace = run_scenario(s.topo, s.cfg.scenario, s.plan, opts.seed);
    fs::create_directories(opts.out_dir);
    {
        auto out = open_out(fs::path(opts.out_dir) / "trace.jsonl");
        write_trace(trace, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "truth.json");
        write_truth_sidecar(trace, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "config_resolved.json");
        out << dump_config(s.cfg) << '\n';
    }
    std::cout << "simulated " << trace.probes.size() << " probes over "
              << trace.horizon_epochs << " epochs (" << s.plan.per_epoch() << "/epoch)\n";
    return 0;
}

std::vector<WindowResult> infer_windows(const Stack& s, const Trace& trace, std::uint64_t seed,
                                        bool diagnose) {
    const int windows = (trace.horizon_epochs + s.cfg.window_epochs - 1) / s.cfg.window_epochs;
    LogNormalizer normalizer =
        s.cfg.rules_file ? LogNormalizer::from_file(*s.cfg.rules_file) : LogNormalizer();
    std::map<ComponentId, HealthBelief> priors;
    const HealthBelief default_prior{s.cfg.inference.prior_alpha, s.cfg.inference.prior_beta};
    std::map<ComponentId, int> streaks;

    std::vector<WindowResult> out;
    for (int w = 0; w < windows; ++w) {
        WindowResult wr;
        wr.window = w;
        AggregateResult agg = aggregate(trace, s.plan, w);
        FactorGraph graph = build_graph(s.topo, agg.observations, priors, default_prior);
        MCMCConfig mcfg = s.cfg.inference.mcmc;
        mcfg.seed = mix_seed(s.cfg.inference.mcmc.seed, 0x1FULL, static_cast<std::uint64_t>(w), seed);
        wr.inference = infer(graph, mcfg);
        wr.flagged = flag_unhealthy(wr.inference.posteriors, s.cfg.inference.flag_threshold,
                                    s.cfg.inference.min_windows, streaks);
        if (diagnose) {
            wr.diagnosis = diagnose_window(trace, w, s.cfg.window_epochs, wr.flagged, normalizer,
                                           s.cfg.diagnosis);
        }
        priors = carry_forward(wr.inference.posteriors, s.cfg.inference.forgetting);
        out.push_back(std::move(wr));
    }
    return out;
}

int cmd_infer(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    Trace trace = load_trace(opts.out_dir);
    auto windows = infer_windows(s, trace, trace.seed, /*diagnose=*/false);
    auto out = open_out(fs::path(opts.out_dir) / "posteriors.jsonl");
    write_posteriors(windows, s.cfg.inference.flag_threshold, out);
    int flagged = 0;
    for (const auto& wr : windows) flagged += static_cast<int>(wr.flagged.size());
    std::cout << "inferred " << windows.size() << " windows, " << flagged
              << " flagged component-windows\n";
    return 0;
}

int cmd_diagnose(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    Trace trace = load_trace(opts.out_dir);
    auto windows = infer_windows(s, trace, trace.seed, /*diagnose=*/true);
    {
        auto out = open_out(fs::path(opts.out_dir) / "posteriors.jsonl");
        write_posteriors(windows, s.cfg.inference.flag_threshold, out);
    }
    auto out = open_out(fs::path(opts.out_dir) / "diagnosis.jsonl");
    write_diagnoses(windows, out);
    std::cout << "diagnosed " << windows.size() << " windows\n";
    return 0;
}

int cmd_score(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    Trace trace = load_trace(opts.out_dir);
    auto windows = infer_windows(s, trace, trace.seed, /*diagnose=*/true);
    std::vector<WindowVerdicts> verdicts;
    for (const auto& wr : windows) {
        WindowVerdicts wv;
        wv.window = wr.window;
        wv.flagged = wr.flagged;
        for (const auto& d : wr.diagnosis.diagnoses) wv.verdicts[d.component] = d.verdict;
        verdicts.push_back(std::move(wv));
    }
    ScoreReport score =
        score_results(trace.truth, verdicts, s.cfg.window_epochs, trace.scenario_id, trace.seed);
    auto out = open_out(fs::path(opts.out_dir) / "score.json");
    write_score(score, out);
    std::cout << "recall " << score.true_positives << "/" << score.in_scope_faults << ", "
              << score.false_positives << " false positives\n";
    return 0;
}

int cmd_heatmap(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    Trace trace = load_trace(opts.out_dir);
    const int windows = (trace.horizon_epochs + s.cfg.window_epochs - 1) / s.cfg.window_epochs;
    int files = 0;
    for (int w = 0; w < windows; ++w) {
        for (const auto& m : emit_heatmap(trace, s.plan, s.topo, w)) {
            const auto path = fs::path(opts.out_dir) / ("heatmap_w" + std::to_string(m.window) +
                                                        "_d" + std::to_string(m.domain) + ".csv");
            auto out = open_out(path);
            write_heatmap_csv(m, out);
            ++files;
        }
    }
    std::cout << "wrote " << files << " heatmap files\n";
    return 0;
}

int cmd_pipeline(const CommonOpts& opts) {
    Stack s = build_stack(opts);
    PipelineResult result = run_pipeline(s.topo, s.plan, s.cfg, opts.seed);
    fs::create_directories(opts.out_dir);
    {
        auto out = open_out(fs::path(opts.out_dir) / "trace.jsonl");
        write_trace(result.trace, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "truth.json");
        write_truth_sidecar(result.trace, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "posteriors.jsonl");
        write_posteriors(result.windows, s.cfg.inference.flag_threshold, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "diagnosis.jsonl");
        write_diagnoses(result.windows, out);
    }
    {
        auto out = open_out(fs::path(opts.out_dir) / "score.json");
        write_score(result.score, out);
    }
    const int windows = static_cast<int>(result.windows.size());
    for (int w = 0; w < windows; ++w) {
        for (const auto& m : emit_heatmap(result.trace, s.plan, s.topo, w)) {
            auto out = open_out(fs::path(opts.out_dir) / ("heatmap_w" + std::to_string(m.window) +
                                                          "_d" + std::to_string(m.domain) + ".csv"));
            write_heatmap_csv(m, out);
        }
    }
    std::cout << "pipeline done: recall " << result.score.true_positives << "/"
              << result.score.in_scope_faults << ", FP " << result.score.false_positives
              << "; outputs under " << opts.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probe-driven storage-cluster health monitoring simulator"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* topo = app.add_subcommand("topo", "topology commands")->require_subcommand(1);
    auto* topo_gen = topo->add_subcommand("gen", "generate and dump a topology");
    add_common(topo_gen, opts);

    auto* sim = app.add_subcommand("sim", "simulator commands")->require_subcommand(1);
    auto* sim_run = sim->add_subcommand("run", "run a fault-injection scenario");
    add_common(sim_run, opts);

    auto* infer_cmd = app.add_subcommand("infer", "posterior health per window from a trace");
    add_common(infer_cmd, opts);
    auto* diagnose_cmd = app.add_subcommand("diagnose", "root-cause verdicts for flagged components");
    add_common(diagnose_cmd, opts);
    auto* score_cmd = app.add_subcommand("score", "score results against the ground-truth sidecar");
    add_common(score_cmd, opts);
    auto* heatmap_cmd = app.add_subcommand("heatmap", "client x server failure-ratio CSVs");
    add_common(heatmap_cmd, opts);
    auto* pipeline_cmd = app.add_subcommand("pipeline", "simulate, infer, diagnose, score");
    add_common(pipeline_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (topo_gen->parsed()) return cmd_topo_gen(opts);
        if (sim_run->parsed()) return cmd_sim_run(opts);
        if (infer_cmd->parsed()) return cmd_infer(opts);
        if (diagnose_cmd->parsed()) return cmd_diagnose(opts);
        if (score_cmd->parsed()) return cmd_score(opts);
        if (heatmap_cmd->parsed()) return cmd_heatmap(opts);
        if (pipeline_cmd->parsed()) return cmd_pipeline(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
