// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/config.hpp"

#include <fstream>

#include <json.hpp>

#include "storelens/errors.hpp"

namespace storelens {

using json = nlohmann::ordered_json;

PipelineConfig ci_scale_config() {
    PipelineConfig cfg;
    cfg.topology.clients = 8;
    cfg.topology.mds = 2;
    cfg.topology.data_servers = 32;
    cfg.topology.osds = 32;
    cfg.topology.lnets = 8;
    cfg.topology.lnet_group_size = 4;
    cfg.topology.seed = 7;
    cfg.monitors.budget = 6;
    cfg.monitors.k = 1;
    return cfg;
}

PipelineConfig full_scale_config() {
    PipelineConfig cfg;
    cfg.topology.clients = 93;
    cfg.topology.login_clients = 4;
    cfg.topology.service_clients = 64;
    cfg.topology.import_export_clients = 25;
    cfg.topology.mds = 6;
    cfg.topology.data_servers = 432;
    cfg.topology.osds = 432;
    cfg.topology.lnets = 36;
    cfg.topology.lnet_group_size = 4;
    cfg.topology.seed = 7;
    cfg.monitors.budget = 6;
    cfg.monitors.k = 1;
    return cfg;
}

namespace {

void load_latency(const json& j, LatencyModel& m) {
    if (j.contains("mu_log_ms")) m.base.mu_log_ms = j["mu_log_ms"].get<double>();
    if (j.contains("sigma_log")) m.base.sigma_log = j["sigma_log"].get<double>();
    if (j.contains("slo_ms")) m.slo_ms = j["slo_ms"].get<double>();
    if (j.contains("timeout_ms")) m.timeout_ms = j["timeout_ms"].get<double>();
    if (j.contains("failover_multiplier")) m.failover_multiplier = j["failover_multiplier"].get<double>();
    if (j.contains("p4_scale")) m.p4_scale = j["p4_scale"].get<double>();
    if (j.contains("p5_scale")) m.p5_scale = j["p5_scale"].get<double>();
    auto op_override = [&j](const char* key) -> std::optional<OpLatency> {
        if (!j.contains(key)) return std::nullopt;
        OpLatency o;
        o.mu_log_ms = j[key].value("mu_log_ms", o.mu_log_ms);
        o.sigma_log = j[key].value("sigma_log", o.sigma_log);
        return o;
    };
    if (auto o = op_override("crwr")) m.crwr = o;
    if (auto o = op_override("wrex")) m.wrex = o;
    if (auto o = op_override("rmex")) m.rmex = o;
}

void load_side_channels(const json& j, SideChannelParams& p) {
    if (j.contains("loadavg_mean")) p.loadavg_mean = j["loadavg_mean"].get<double>();
    if (j.contains("loadavg_sd")) p.loadavg_sd = j["loadavg_sd"].get<double>();
    if (j.contains("overload_loadavg_span")) p.overload_loadavg_span = j["overload_loadavg_span"].get<double>();
    if (j.contains("overload_loadavg_sd")) p.overload_loadavg_sd = j["overload_loadavg_sd"].get<double>();
    if (j.contains("await_mean_ms")) p.await_mean_ms = j["await_mean_ms"].get<double>();
    if (j.contains("await_sd_ms")) p.await_sd_ms = j["await_sd_ms"].get<double>();
    if (j.contains("overload_await_span_ms")) p.overload_await_span_ms = j["overload_await_span_ms"].get<double>();
    if (j.contains("util_mean")) p.util_mean = j["util_mean"].get<double>();
    if (j.contains("util_sd")) p.util_sd = j["util_sd"].get<double>();
    if (j.contains("overload_util_span")) p.overload_util_span = j["overload_util_span"].get<double>();
}

}  // namespace

PipelineConfig load_config(const std::string& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }

    PipelineConfig cfg = std::move(base);
    if (j.contains("topology")) {
        const auto& t = j["topology"];
        auto& spec = cfg.topology;
        spec.clients = t.value("clients", spec.clients);
        spec.login_clients = t.value("login_clients", spec.login_clients);
        spec.service_clients = t.value("service_clients", spec.service_clients);
        spec.import_export_clients = t.value("import_export_clients", spec.import_export_clients);
        spec.mds = t.value("mds", spec.mds);
        spec.data_servers = t.value("data_servers", spec.data_servers);
        spec.osds = t.value("osds", spec.osds);
        spec.lnets = t.value("lnets", spec.lnets);
        spec.lnet_group_size = t.value("lnet_group_size", spec.lnet_group_size);
        spec.mgs = t.value("mgs", spec.mgs);
        spec.seed = t.value("seed", spec.seed);
    }
    if (j.contains("monitors")) {
        const auto& m = j["monitors"];
        cfg.monitors.budget = m.value("budget", cfg.monitors.budget);
        cfg.monitors.k = m.value("k", cfg.monitors.k);
        cfg.monitors.identifiability_samples =
            m.value("identifiability_samples", cfg.monitors.identifiability_samples);
        if (m.contains("explicit")) {
            for (const auto& id : m["explicit"]) {
                cfg.monitors.explicit_monitors.push_back(parse_component(id.get<std::string>()));
            }
        }
    }
    if (j.contains("plan")) {
        cfg.interval_s = j["plan"].value("interval_s", cfg.interval_s);
        cfg.window_epochs = j["plan"].value("window_epochs", cfg.window_epochs);
    }
    if (j.contains("latency")) load_latency(j["latency"], cfg.scenario.latency);
    if (j.contains("side_channels")) load_side_channels(j["side_channels"], cfg.scenario.side_channels);
    if (j.contains("scenario")) {
        const auto& s = j["scenario"];
        cfg.scenario.id = s.value("id", cfg.scenario.id);
        cfg.scenario.horizon_epochs = s.value("horizon_epochs", cfg.scenario.horizon_epochs);
        if (s.contains("faults")) {
            cfg.scenario.faults.clear();
            for (const auto& f : s["faults"]) {
                FaultSpec spec;
                spec.kind = parse_fault_kind(f.at("kind").get<std::string>());
                spec.target = parse_component(f.at("target").get<std::string>());
                spec.start_epoch = f.value("start", 0);
                spec.end_epoch = f.value("end", cfg.scenario.horizon_epochs - 1);
                spec.severity = f.value("severity", 1.0);
                cfg.scenario.faults.push_back(spec);
            }
        }
    }
    if (j.contains("inference")) {
        const auto& i = j["inference"];
        cfg.inference.mcmc.chains = i.value("chains", cfg.inference.mcmc.chains);
        cfg.inference.mcmc.samples = i.value("samples", cfg.inference.mcmc.samples);
        cfg.inference.mcmc.burn_in = i.value("burn_in", cfg.inference.mcmc.burn_in);
        cfg.inference.mcmc.seed = i.value("seed", cfg.inference.mcmc.seed);
        cfg.inference.mcmc.rhat_max = i.value("rhat_max", cfg.inference.mcmc.rhat_max);
        cfg.inference.prior_alpha = i.value("prior_alpha", cfg.inference.prior_alpha);
        cfg.inference.prior_beta = i.value("prior_beta", cfg.inference.prior_beta);
        cfg.inference.flag_threshold = i.value("flag_threshold", cfg.inference.flag_threshold);
        cfg.inference.min_windows = i.value("min_windows", cfg.inference.min_windows);
        cfg.inference.forgetting = i.value("forgetting", cfg.inference.forgetting);
    }
    if (j.contains("diagnosis")) {
        const auto& d = j["diagnosis"];
        cfg.diagnosis.lof_threshold = d.value("lof_threshold", cfg.diagnosis.lof_threshold);
        cfg.diagnosis.lof_k_min = d.value("lof_k_min", cfg.diagnosis.lof_k_min);
        cfg.diagnosis.lof_k_fraction = d.value("lof_k_fraction", cfg.diagnosis.lof_k_fraction);
        cfg.diagnosis.min_template_occurrence =
            d.value("min_template_occurrence", cfg.diagnosis.min_template_occurrence);
        if (d.contains("rules_file")) cfg.rules_file = d["rules_file"].get<std::string>();
    }
    return cfg;
}

std::string dump_config(const PipelineConfig& cfg) {
    json j;
    j["topology"] = json{{"clients", cfg.topology.clients},
                         {"login_clients", cfg.topology.login_clients},
                         {"service_clients", cfg.topology.service_clients},
                         {"import_export_clients", cfg.topology.import_export_clients},
                         {"mds", cfg.topology.mds},
                         {"data_servers", cfg.topology.data_servers},
                         {"osds", cfg.topology.osds},
                         {"lnets", cfg.topology.lnets},
                         {"lnet_group_size", cfg.topology.lnet_group_size},
                         {"mgs", cfg.topology.mgs},
                         {"seed", cfg.topology.seed}};
    j["monitors"] = json{{"budget", cfg.monitors.budget},
                         {"k", cfg.monitors.k},
                         {"identifiability_samples", cfg.monitors.identifiability_samples}};
    j["plan"] = json{{"interval_s", cfg.interval_s}, {"window_epochs", cfg.window_epochs}};
    j["latency"] = json{{"mu_log_ms", cfg.scenario.latency.base.mu_log_ms},
                        {"sigma_log", cfg.scenario.latency.base.sigma_log},
                        {"slo_ms", cfg.scenario.latency.slo_ms},
                        {"timeout_ms", cfg.scenario.latency.timeout_ms},
                        {"failover_multiplier", cfg.scenario.latency.failover_multiplier},
                        {"p4_scale", cfg.scenario.latency.p4_scale},
                        {"p5_scale", cfg.scenario.latency.p5_scale}};
    j["scenario"] = json{{"id", cfg.scenario.id}, {"horizon_epochs", cfg.scenario.horizon_epochs}};
    j["scenario"]["faults"] = json::array();
    for (const auto& f : cfg.scenario.faults) {
        j["scenario"]["faults"].push_back(json{{"kind", fault_kind_name(f.kind)},
                                               {"target", f.target.str()},
                                               {"start", f.start_epoch},
                                               {"end", f.end_epoch},
                                               {"severity", f.severity}});
    }
    j["inference"] = json{{"chains", cfg.inference.mcmc.chains},
                          {"samples", cfg.inference.mcmc.samples},
                          {"burn_in", cfg.inference.mcmc.burn_in},
                          {"seed", cfg.inference.mcmc.seed},
                          {"rhat_max", cfg.inference.mcmc.rhat_max},
                          {"prior_alpha", cfg.inference.prior_alpha},
                          {"prior_beta", cfg.inference.prior_beta},
                          {"flag_threshold", cfg.inference.flag_threshold},
                          {"min_windows", cfg.inference.min_windows},
                          {"forgetting", cfg.inference.forgetting}};
    j["diagnosis"] = json{{"lof_threshold", cfg.diagnosis.lof_threshold},
                          {"lof_k_min", cfg.diagnosis.lof_k_min},
                          {"lof_k_fraction", cfg.diagnosis.lof_k_fraction},
                          {"min_template_occurrence", cfg.diagnosis.min_template_occurrence}};
    return j.dump(2);
}

}  // namespace storelens
