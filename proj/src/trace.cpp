// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/trace.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "storelens/errors.hpp"

namespace storelens {

using json = nlohmann::ordered_json;

namespace {

OpKind parse_op(const std::string& s) {
    if (s == "CrWr") return OpKind::CrWr;
    if (s == "WrEx") return OpKind::WrEx;
    if (s == "RmEx") return OpKind::RmEx;
    throw ConfigError("bad op kind in trace: " + s);
}

ProbeStatus parse_status(const std::string& s) {
    if (s == "ok") return ProbeStatus::Ok;
    if (s == "slow") return ProbeStatus::Slow;
    if (s == "timeout") return ProbeStatus::Timeout;
    if (s == "error") return ProbeStatus::Error;
    throw ConfigError("bad status in trace: " + s);
}

json fault_to_json(const InjectedFault& f) {
    return json{{"kind", fault_kind_name(f.fault.kind)},
                {"target", f.fault.target.str()},
                {"start", f.fault.start_epoch},
                {"end", f.fault.end_epoch},
                {"severity", f.fault.severity},
                {"impacted_probes", f.impacted_probes}};
}

InjectedFault fault_from_json(const json& j) {
    InjectedFault f;
    f.fault.kind = parse_fault_kind(j.at("kind").get<std::string>());
    f.fault.target = parse_component(j.at("target").get<std::string>());
    f.fault.start_epoch = j.at("start").get<int>();
    f.fault.end_epoch = j.at("end").get<int>();
    f.fault.severity = j.at("severity").get<double>();
    f.impacted_probes = j.at("impacted_probes").get<std::int64_t>();
    return f;
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& out) {
    json header{{"type", "header"},
                {"scenario", trace.scenario_id},
                {"seed", trace.seed},
                {"horizon_epochs", trace.horizon_epochs},
                {"slo_ms", trace.slo_ms},
                {"timeout_ms", trace.timeout_ms}};
    out << header.dump() << '\n';
    for (const auto& p : trace.probes) {
        json j{{"type", "probe"},     {"epoch", p.epoch},
               {"monitor", p.monitor.str()}, {"target", p.target.str()},
               {"op", op_kind_name(p.op)},   {"flavor", flavor_name(p.flavor)},
               {"latency_ms", p.latency_ms}, {"status", status_name(p.status)},
               {"lnet", p.lnet.str()}};
        if (p.serving_ds) j["serving_ds"] = p.serving_ds->str();
        out << j.dump() << '\n';
    }
    for (const auto& m : trace.metrics) {
        json j{{"type", "metric"}, {"component", m.component.str()}, {"epoch", m.epoch}};
        if (m.loadavg) j["loadavg"] = *m.loadavg;
        if (m.await_ms) j["await_ms"] = *m.await_ms;
        if (m.utilization) j["utilization"] = *m.utilization;
        out << j.dump() << '\n';
    }
    for (const auto& l : trace.logs) {
        json j{{"type", "log"}, {"component", l.component.str()}, {"epoch", l.epoch}, {"text", l.raw_text}};
        out << j.dump() << '\n';
    }
    for (const auto& h : trace.heartbeats) {
        json j{{"type", "heartbeat"}, {"component", h.component.str()}, {"epoch", h.epoch}, {"up", h.up}};
        out << j.dump() << '\n';
    }
}

void write_truth_sidecar(const Trace& trace, std::ostream& out) {
    json j{{"scenario", trace.scenario_id}, {"seed", trace.seed}, {"faults", json::array()}};
    for (const auto& f : trace.truth) j["faults"].push_back(fault_to_json(f));
    out << j.dump(2) << '\n';
}

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            trace.scenario_id = j.at("scenario").get<std::string>();
            trace.seed = j.at("seed").get<std::uint64_t>();
            trace.horizon_epochs = j.at("horizon_epochs").get<int>();
            trace.slo_ms = j.at("slo_ms").get<double>();
            trace.timeout_ms = j.at("timeout_ms").get<double>();
        } else if (type == "probe") {
            ProbeResult p;
            p.epoch = j.at("epoch").get<int>();
            p.monitor = parse_component(j.at("monitor").get<std::string>());
            p.target = parse_component(j.at("target").get<std::string>());
            p.op = parse_op(j.at("op").get<std::string>());
            p.flavor = j.at("flavor").get<std::string>() == "memory" ? ProbeFlavor::Memory
                                                                     : ProbeFlavor::Disk;
            p.latency_ms = j.at("latency_ms").get<double>();
            p.status = parse_status(j.at("status").get<std::string>());
            p.lnet = parse_component(j.at("lnet").get<std::string>());
            if (j.contains("serving_ds")) p.serving_ds = parse_component(j["serving_ds"].get<std::string>());
            trace.probes.push_back(p);
        } else if (type == "metric") {
            MetricSample m;
            m.component = parse_component(j.at("component").get<std::string>());
            m.epoch = j.at("epoch").get<int>();
            if (j.contains("loadavg")) m.loadavg = j["loadavg"].get<double>();
            if (j.contains("await_ms")) m.await_ms = j["await_ms"].get<double>();
            if (j.contains("utilization")) m.utilization = j["utilization"].get<double>();
            trace.metrics.push_back(m);
        } else if (type == "log") {
            trace.logs.push_back({parse_component(j.at("component").get<std::string>()),
                                  j.at("epoch").get<int>(), j.at("text").get<std::string>()});
        } else if (type == "heartbeat") {
            trace.heartbeats.push_back({parse_component(j.at("component").get<std::string>()),
                                        j.at("epoch").get<int>(), j.at("up").get<bool>()});
        } else {
            throw ConfigError("unknown trace record type: " + type);
        }
    }
    return trace;
}

std::vector<InjectedFault> read_truth_sidecar(std::istream& in) {
    json j = json::parse(in);
    std::vector<InjectedFault> out;
    for (const auto& f : j.at("faults")) out.push_back(fault_from_json(f));
    return out;
}

}  // namespace storelens
