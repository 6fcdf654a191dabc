// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "storelens/errors.hpp"
#include "storelens/rng.hpp"

namespace storelens {

const std::vector<const FaultSpec*> ActiveFaults::kEmpty;

ActiveFaults::ActiveFaults(const std::vector<FaultSpec>& faults, int epoch) : all_(&faults) {
    for (const auto& f : faults) {
        if (!f.active_at(epoch)) continue;
        active_.push_back(&f);
        auto it = std::find(keys_.begin(), keys_.end(), f.target);
        if (it == keys_.end()) {
            keys_.push_back(f.target);
            by_component_.emplace_back();
            by_component_.back().push_back(&f);
        } else {
            by_component_[static_cast<std::size_t>(it - keys_.begin())].push_back(&f);
        }
    }
}

bool ActiveFaults::hard_failed(const ComponentId& id) const {
    for (const FaultSpec* f : on(id)) {
        if (fault_detected(f->kind)) return true;
    }
    return false;
}

const FaultSpec* ActiveFaults::find(const ComponentId& id, FaultKind kind) const {
    for (const FaultSpec* f : on(id)) {
        if (f->kind == kind) return f;
    }
    return nullptr;
}

const std::vector<const FaultSpec*>& ActiveFaults::on(const ComponentId& id) const {
    auto it = std::find(keys_.begin(), keys_.end(), id);
    if (it == keys_.end()) return kEmpty;
    return by_component_[static_cast<std::size_t>(it - keys_.begin())];
}

int ActiveFaults::index_of(const FaultSpec* f) const {
    return static_cast<int>(f - all_->data());
}

namespace {

// Substream tags; every random decision gets its own stream so that adding
// a fault never perturbs unrelated draws (keeps paired-seed runs aligned).
constexpr std::uint64_t kTagBaseline = 1;
constexpr std::uint64_t kTagDrop = 2;
constexpr std::uint64_t kTagMetrics = 3;
constexpr std::uint64_t kTagLogs = 4;

struct RouteEval {
    bool failed = false;
    ProbeStatus fail_status = ProbeStatus::Timeout;
    double multiplier = 1.0;
    std::vector<int> contributors;
};

void add_contrib(std::vector<int>& v, int idx) {
    if (std::find(v.begin(), v.end(), idx) == v.end()) v.push_back(idx);
}

// Applies hard failures, gray drops and slowdown factors of one route
// component. Hard failures here are the non-absorbable ones (the caller
// already resolved failover and LNET rerouting).
void eval_component(const ComponentId& c, const ActiveFaults& active, const LatencyModel& latency,
                    std::uint64_t probe_seed, RouteEval& ev) {
    for (const FaultSpec* f : active.on(c)) {
        const int idx = active.index_of(f);
        switch (f->kind) {
            case FaultKind::P1_FailStop:
                ev.failed = true;
                ev.fail_status = ProbeStatus::Timeout;
                add_contrib(ev.contributors, idx);
                return;
            case FaultKind::P2_ProcessCrash:
                if (!ev.failed) ev.fail_status = ProbeStatus::Error;
                ev.failed = true;
                add_contrib(ev.contributors, idx);
                return;
            case FaultKind::P3_Gray: {
                auto rng = substream(probe_seed, kTagDrop, component_tag(c));
                std::uniform_real_distribution<double> u(0.0, 1.0);
                if (u(rng) < f->severity) {
                    ev.failed = true;
                    ev.fail_status = ProbeStatus::Timeout;
                    add_contrib(ev.contributors, idx);
                    return;
                }
                break;
            }
            case FaultKind::P4_FailSlowMasked:
                ev.multiplier *= 1.0 + f->severity * latency.p4_scale;
                add_contrib(ev.contributors, idx);
                break;
            case FaultKind::P5_Overload:
                ev.multiplier *= 1.0 + f->severity * latency.p5_scale;
                add_contrib(ev.contributors, idx);
                break;
        }
    }
}

}  // namespace

ProbeOutcome sample_outcome(const Topology& topo, const ProbeEntry& entry, int epoch,
                            const LatencyModel& latency, const ActiveFaults& active,
                            std::uint64_t probe_seed) {
    ProbeOutcome out;
    ProbeResult& r = out.result;
    r.epoch = epoch;
    r.monitor = entry.monitor;
    r.target = entry.target;
    r.op = entry.op;
    r.flavor = entry.flavor;

    RouteEval ev;

    // LNET leg: round-robin over the fixed group; detected-failed members
    // are skipped by routing, a whole dead group kills the request.
    const auto group = topo.lnet_group(entry.monitor, entry.target);
    const int rotation = topo.lnet_offset(entry.monitor, entry.target) + epoch +
                         2 * static_cast<int>(entry.op) + static_cast<int>(entry.flavor);
    int chosen = -1;
    for (std::size_t j = 0; j < group.size(); ++j) {
        const auto& cand = group[(static_cast<std::size_t>(rotation) + j) % group.size()];
        if (!active.hard_failed(cand)) {
            chosen = static_cast<int>((static_cast<std::size_t>(rotation) + j) % group.size());
            break;
        }
    }
    if (chosen < 0) {
        r.lnet = group[static_cast<std::size_t>(rotation) % group.size()];
        for (const auto& m : group) {
            for (const FaultSpec* f : active.on(m)) {
                if (fault_detected(f->kind)) add_contrib(ev.contributors, active.index_of(f));
            }
        }
        ev.failed = true;
    } else {
        r.lnet = group[static_cast<std::size_t>(chosen)];
    }

    // Data-OSD leg: primary pair member serves; a detected-failed primary
    // fails over to the partner at a latency penalty.
    bool failover = false;
    if (!ev.failed && entry.target.kind == Kind::Osd) {
        ComponentId primary = topo.osd_primary(entry.target);
        ComponentId serving = primary;
        if (active.hard_failed(primary)) {
            for (const FaultSpec* f : active.on(primary)) {
                if (fault_detected(f->kind)) add_contrib(ev.contributors, active.index_of(f));
            }
            ComponentId partner = topo.osd_secondary(entry.target);
            if (active.hard_failed(partner)) {
                for (const FaultSpec* f : active.on(partner)) {
                    if (fault_detected(f->kind)) add_contrib(ev.contributors, active.index_of(f));
                }
                ev.failed = true;
            } else {
                serving = partner;
                failover = true;
            }
        }
        r.serving_ds = serving;
        if (!ev.failed) eval_component(serving, active, latency, probe_seed, ev);
    }

    // Serial components and the target itself.
    if (!ev.failed) {
        for (const auto& c :
             {entry.monitor, ComponentId{Kind::ComputeNet, 0}, ComponentId{Kind::StorageNet, 0}}) {
            eval_component(c, active, latency, probe_seed, ev);
            if (ev.failed) break;
        }
    }
    if (!ev.failed) eval_component(r.lnet, active, latency, probe_seed, ev);
    if (!ev.failed) eval_component(entry.target, active, latency, probe_seed, ev);

    // Baseline latency draw comes from its own stream so it is identical
    // with and without faults.
    const OpLatency& par = latency.params(entry.op);
    auto base_rng = substream(probe_seed, kTagBaseline);
    std::lognormal_distribution<double> dist(par.mu_log_ms, par.sigma_log);
    const double base = dist(base_rng);

    if (ev.failed) {
        if (ev.fail_status == ProbeStatus::Error) {
            r.status = ProbeStatus::Error;
            r.latency_ms = std::min(base, latency.slo_ms);
        } else {
            r.status = ProbeStatus::Timeout;
            r.latency_ms = latency.timeout_ms;
        }
        out.impacted_by = ev.contributors;
        return out;
    }

    double lat = base * ev.multiplier;
    if (failover) lat *= latency.failover_multiplier;
    if (lat >= latency.timeout_ms) {
        r.status = ProbeStatus::Timeout;
        r.latency_ms = latency.timeout_ms;
    } else if (lat > latency.slo_ms) {
        r.status = ProbeStatus::Slow;
        r.latency_ms = lat;
    } else {
        r.status = ProbeStatus::Ok;
        r.latency_ms = lat;
    }
    if (r.status != ProbeStatus::Ok) {
        if (failover) {
            ComponentId primary = topo.osd_primary(entry.target);
            for (const FaultSpec* f : active.on(primary)) {
                if (fault_detected(f->kind)) add_contrib(ev.contributors, active.index_of(f));
            }
        }
        out.impacted_by = ev.contributors;
    }
    return out;
}

namespace {

std::string two_digits(std::uint64_t v) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02u", static_cast<unsigned>(v % 60));
    return buf;
}

std::string timestamp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> day(1, 28);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "2026-02-%02d %02u:%s:%s", day(rng),
                  static_cast<unsigned>(rng() % 24), two_digits(rng()).c_str(),
                  two_digits(rng()).c_str());
    return buf;
}

std::string hex_token(std::mt19937_64& rng) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(rng() % 0xffffffULL));
    return buf;
}

// Background events every healthy component keeps emitting; the rotation
// guarantees each component walks the whole pool across a window, so
// healthy peers always cover it.
constexpr std::array<const char*, 4> kBackgroundPool = {
    "srv: heartbeat seq %NUM% ok",
    "net: conn from c%NUM% established",
    "io: commit batch %NUM% flushed in %NUM% ms",
    "mon: rpc queue depth %NUM%",
};

const char* fault_log_body(FaultKind k) {
    switch (k) {
        case FaultKind::P1_FailStop:
            return "kernel: Oops: unable to handle request at %HEX%; halting";
        case FaultKind::P2_ProcessCrash:
            return "srv[%NUM%]: segfault at %HEX%; service exited, respawn scheduled";
        case FaultKind::P4_FailSlowMasked:
            return "raid: volume degraded; rebuilding to hot spare, %NUM%%% done";
        default:
            return nullptr;  // gray and overload faults leave no unique log trail
    }
}

std::string fill_template(const char* body, const ComponentId& node, std::mt19937_64& rng) {
    std::string text = timestamp(rng) + " " + node.str() + " ";
    for (const char* p = body; *p;) {
        if (std::strncmp(p, "%NUM%", 5) == 0) {
            text += std::to_string(rng() % 100000);
            p += 5;
        } else if (std::strncmp(p, "%HEX%", 5) == 0) {
            text += hex_token(rng);
            p += 5;
        } else if (std::strncmp(p, "%%", 2) == 0) {
            text += '%';
            p += 2;
        } else {
            text += *p++;
        }
    }
    return text;
}

double clipped_normal(std::mt19937_64& rng, double mean, double sd, double lo, double hi) {
    std::normal_distribution<double> d(mean, sd);
    return std::clamp(d(rng), lo, hi);
}

}  // namespace

SideChannelBatch emit_side_channels(const Topology& topo, const Scenario& scenario, int epoch,
                                    std::uint64_t seed) {
    if (epoch < 0 || epoch >= scenario.horizon_epochs) {
        throw ConfigError("epoch outside the scenario horizon");
    }
    const SideChannelParams& p = scenario.side_channels;
    const ActiveFaults active(scenario.faults, epoch);
    SideChannelBatch batch;

    for (const auto& c : topo.components()) {
        if (c.kind == Kind::Client || c.kind == Kind::Mgs) continue;

        const bool dead = active.find(c, FaultKind::P1_FailStop) != nullptr;
        const FaultSpec* overload = active.find(c, FaultKind::P5_Overload);

        batch.heartbeats.push_back({c, epoch, !dead});

        auto mrng = substream(seed, kTagMetrics, component_tag(c), static_cast<std::uint64_t>(epoch));
        if (!dead && (c.kind == Kind::DataServer || c.kind == Kind::Mds)) {
            MetricSample s{c, epoch, {}, {}, {}};
            s.loadavg = overload ? clipped_normal(mrng, p.loadavg_mean + overload->severity * p.overload_loadavg_span,
                                                  p.overload_loadavg_sd, 0.0, 1e9)
                                 : clipped_normal(mrng, p.loadavg_mean, p.loadavg_sd, 0.0, 1e9);
            batch.metrics.push_back(s);
        } else if (!dead && c.kind == Kind::Osd) {
            MetricSample s{c, epoch, {}, {}, {}};
            if (overload) {
                s.await_ms = clipped_normal(mrng, p.await_mean_ms + overload->severity * p.overload_await_span_ms,
                                            p.await_sd_ms * 3.0, 0.1, 1e9);
                s.utilization = clipped_normal(mrng, p.util_mean + overload->severity * p.overload_util_span,
                                               p.util_sd / 2.0, 0.0, 1.0);
            } else {
                s.await_ms = clipped_normal(mrng, p.await_mean_ms, p.await_sd_ms, 0.1, 1e9);
                s.utilization = clipped_normal(mrng, p.util_mean, p.util_sd, 0.0, 1.0);
            }
            batch.metrics.push_back(s);
        }

        auto lrng = substream(seed, kTagLogs, component_tag(c), static_cast<std::uint64_t>(epoch));
        if (!dead) {
            for (int i = 0; i < 2; ++i) {
                const auto idx = static_cast<std::size_t>(2 * epoch + c.index + i) % kBackgroundPool.size();
                batch.logs.push_back({c, epoch, fill_template(kBackgroundPool[idx], c, lrng)});
            }
        }
        for (const FaultSpec* f : active.on(c)) {
            if (const char* body = fault_log_body(f->kind)) {
                batch.logs.push_back({c, epoch, fill_template(body, c, lrng)});
            }
        }
    }
    return batch;
}

Trace run_scenario(const Topology& topo, const Scenario& scenario, const ProbePlan& plan,
                   std::uint64_t seed) {
    for (const auto& m : plan.monitors) {
        if (m.kind != Kind::Client || !topo.contains(m)) {
            throw ConfigError("plan references a monitor not in this topology: " + m.str());
        }
    }
    for (const auto& e : plan.entries) {
        if (!topo.contains(e.target)) {
            throw ConfigError("plan references a target not in this topology: " + e.target.str());
        }
    }
    scenario.latency.validate();

    Trace trace;
    trace.scenario_id = scenario.id;
    trace.seed = seed;
    trace.horizon_epochs = scenario.horizon_epochs;
    trace.slo_ms = scenario.latency.slo_ms;
    trace.timeout_ms = scenario.latency.timeout_ms;
    trace.truth.reserve(scenario.faults.size());
    for (const auto& f : scenario.faults) trace.truth.push_back({f, 0});

    trace.probes.reserve(static_cast<std::size_t>(scenario.horizon_epochs) * plan.entries.size());
    for (int epoch = 0; epoch < scenario.horizon_epochs; ++epoch) {
        const ActiveFaults active(scenario.faults, epoch);
        for (std::size_t i = 0; i < plan.entries.size(); ++i) {
            const std::uint64_t probe_seed =
                mix_seed(seed, 0xABULL, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(i));
            ProbeOutcome sampled =
                sample_outcome(topo, plan.entries[i], epoch, scenario.latency, active, probe_seed);
            trace.probes.push_back(sampled.result);
            for (int fidx : sampled.impacted_by) {
                trace.truth[static_cast<std::size_t>(fidx)].impacted_probes++;
            }
        }
        SideChannelBatch side = emit_side_channels(topo, scenario, epoch, seed);
        trace.metrics.insert(trace.metrics.end(), side.metrics.begin(), side.metrics.end());
        trace.logs.insert(trace.logs.end(), side.logs.begin(), side.logs.end());
        trace.heartbeats.insert(trace.heartbeats.end(), side.heartbeats.begin(), side.heartbeats.end());
    }
    return trace;
}

}  // namespace storelens
