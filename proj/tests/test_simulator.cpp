// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "storelens/errors.hpp"
#include "storelens/log_template.hpp"
#include "storelens/probe_plan.hpp"
#include "storelens/rng.hpp"
#include "storelens/simulator.hpp"

using namespace storelens;

namespace {

TopologySpec minimal_spec() {
    TopologySpec s;
    s.clients = 1;
    s.mds = 1;
    s.data_servers = 2;
    s.osds = 1;
    s.lnets = 4;
    s.lnet_group_size = 4;
    s.seed = 3;
    return s;
}

TopologySpec ci_spec() {
    TopologySpec s;
    s.clients = 8;
    s.mds = 2;
    s.data_servers = 32;
    s.osds = 32;
    s.lnets = 8;
    s.lnet_group_size = 4;
    s.seed = 7;
    return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("inject validates target, window and severity") {
    Topology topo = Topology::build(minimal_spec());
    Scenario sc;
    sc.horizon_epochs = 10;

    inject(sc, topo, {FaultKind::P1_FailStop, {Kind::DataServer, 0}, 3, 8, 1.0});
    CHECK(sc.faults.size() == 1);

    CHECK_THROWS_AS(inject(sc, topo, {FaultKind::P1_FailStop, {Kind::DataServer, 7}, 0, 1, 1.0}),
                    NotFoundError);
    CHECK_THROWS_AS(inject(sc, topo, {FaultKind::P1_FailStop, {Kind::Osd, 0}, 5, 2, 1.0}), SpecError);
    CHECK_THROWS_AS(inject(sc, topo, {FaultKind::P1_FailStop, {Kind::Osd, 0}, 0, 20, 1.0}), SpecError);
    CHECK_THROWS_AS(inject(sc, topo, {FaultKind::P3_Gray, {Kind::Osd, 0}, 0, 1, 0.0}), SpecError);
    CHECK_THROWS_AS(inject(sc, topo, {FaultKind::P3_Gray, {Kind::Osd, 0}, 0, 1, 1.5}), SpecError);
}

TEST_CASE("baseline ok-probability matches the closed-form log-normal CDF") {
    Topology topo = Topology::build(minimal_spec());
    Scenario sc;  // defaults: mu=ln(20), sigma=0.5, slo=1000
    const ActiveFaults none(sc.faults, 0);
    const ProbeEntry entry{{Kind::Client, 0}, {Kind::Osd, 0}, OpKind::WrEx, ProbeFlavor::Disk};

    const int n = 100000;
    int ok = 0;
    for (int i = 0; i < n; ++i) {
        auto outcome = sample_outcome(topo, entry, 0, sc.latency, none,
                                      mix_seed(123, static_cast<std::uint64_t>(i)));
        if (outcome.result.status == ProbeStatus::Ok) ++ok;
    }
    const double expected =
        normal_cdf((std::log(sc.latency.slo_ms) - sc.latency.base.mu_log_ms) / sc.latency.base.sigma_log);
    const double rate = static_cast<double>(ok) / n;
    CHECK(std::abs(rate - expected) < 0.005);
    CHECK(rate >= 0.99);
}

TEST_CASE("P1 on the OSD itself always times out") {
    Topology topo = Topology::build(minimal_spec());
    Scenario sc;
    inject(sc, topo, {FaultKind::P1_FailStop, {Kind::Osd, 0}, 0, 4, 1.0});
    const ActiveFaults active(sc.faults, 2);
    const ProbeEntry entry{{Kind::Client, 0}, {Kind::Osd, 0}, OpKind::WrEx, ProbeFlavor::Disk};
    for (int i = 0; i < 200; ++i) {
        auto outcome = sample_outcome(topo, entry, 2, sc.latency, active,
                                      mix_seed(9, static_cast<std::uint64_t>(i)));
        CHECK(outcome.result.status == ProbeStatus::Timeout);
        CHECK(outcome.result.latency_ms == sc.latency.timeout_ms);
    }
}

TEST_CASE("single P1 on one HA member is absorbed with a failover penalty") {
    Topology topo = Topology::build(minimal_spec());
    const ComponentId primary = topo.osd_primary({Kind::Osd, 0});
    const ComponentId partner = topo.osd_secondary({Kind::Osd, 0});
    Scenario sc;
    inject(sc, topo, {FaultKind::P1_FailStop, primary, 0, 4, 1.0});
    const ActiveFaults active(sc.faults, 0);
    const std::vector<FaultSpec> no_faults;
    const ActiveFaults none(no_faults, 0);
    const ProbeEntry osd_probe{{Kind::Client, 0}, {Kind::Osd, 0}, OpKind::WrEx, ProbeFlavor::Disk};
    const ProbeEntry server_probe{{Kind::Client, 0}, primary, OpKind::WrEx, ProbeFlavor::Memory};

    int ok = 0;
    for (int i = 0; i < 500; ++i) {
        auto with_fault = sample_outcome(topo, osd_probe, 0, sc.latency, active,
                                         mix_seed(31, static_cast<std::uint64_t>(i)));
        auto without = sample_outcome(topo, osd_probe, 0, sc.latency, none,
                                      mix_seed(31, static_cast<std::uint64_t>(i)));
        REQUIRE(with_fault.result.serving_ds.has_value());
        CHECK(*with_fault.result.serving_ds == partner);
        if (with_fault.result.status == ProbeStatus::Ok) ++ok;
        // same baseline draw, inflated by the failover penalty
        CHECK(with_fault.result.latency_ms ==
              doctest::Approx(without.result.latency_ms * sc.latency.failover_multiplier));
    }
    CHECK(ok >= 495);  // masked: effectively never a timeout

    // ... while the dead server's own memory path fails hard.
    auto server_out = sample_outcome(topo, server_probe, 0, sc.latency, active, mix_seed(32, 0));
    CHECK(server_out.result.status == ProbeStatus::Timeout);
}

TEST_CASE("P5 inflates latency by 1 + severity * scale") {
    Topology topo = Topology::build(minimal_spec());
    Scenario sc;
    inject(sc, topo, {FaultKind::P5_Overload, {Kind::Mds, 0}, 0, 4, 0.9});
    const ActiveFaults active(sc.faults, 0);
    const std::vector<FaultSpec> no_faults;
    const ActiveFaults none(no_faults, 0);
    const ProbeEntry entry{{Kind::Client, 0}, {Kind::Mds, 0}, OpKind::CrWr, ProbeFlavor::Memory};
    for (int i = 0; i < 100; ++i) {
        auto with_fault = sample_outcome(topo, entry, 0, sc.latency, active,
                                         mix_seed(77, static_cast<std::uint64_t>(i)));
        auto without = sample_outcome(topo, entry, 0, sc.latency, none,
                                      mix_seed(77, static_cast<std::uint64_t>(i)));
        const double factor = 1.0 + 0.9 * sc.latency.p5_scale;
        if (with_fault.result.status != ProbeStatus::Timeout) {
            CHECK(with_fault.result.latency_ms ==
                  doctest::Approx(without.result.latency_ms * factor));
        }
    }
}

TEST_CASE("P3 drops requests with probability severity while heartbeating") {
    Topology topo = Topology::build(ci_spec());
    Scenario sc;
    const ComponentId osd{Kind::Osd, 5};
    inject(sc, topo, {FaultKind::P3_Gray, osd, 0, 4, 0.6});
    const ActiveFaults active(sc.faults, 1);
    const ProbeEntry entry{{Kind::Client, 0}, osd, OpKind::WrEx, ProbeFlavor::Disk};
    int timeouts = 0;
    const int n = 5000;
    for (int i = 0; i < n; ++i) {
        auto out = sample_outcome(topo, entry, 1, sc.latency, active,
                                  mix_seed(55, static_cast<std::uint64_t>(i)));
        if (out.result.status == ProbeStatus::Timeout) ++timeouts;
    }
    const double rate = static_cast<double>(timeouts) / n;
    CHECK(std::abs(rate - 0.6) < 0.03);

    // heartbeats stay green: that is the point of a gray failure
    auto side = emit_side_channels(topo, sc, 1, 5);
    for (const auto& hb : side.heartbeats) {
        if (hb.component == osd) CHECK(hb.up);
    }
}

TEST_CASE("identical (scenario, plan, seed) gives byte-identical traces") {
    Topology topo = Topology::build(ci_spec());
    auto monitors = topo.clients();
    monitors.resize(4);
    ProbePlan plan = plan_probes(topo, monitors);
    Scenario sc;
    sc.horizon_epochs = 5;
    inject(sc, topo, {FaultKind::P1_FailStop, {Kind::DataServer, 17}, 1, 3, 1.0});
    inject(sc, topo, {FaultKind::P5_Overload, {Kind::Osd, 3}, 0, 4, 0.9});

    Trace a = run_scenario(topo, sc, plan, 2024);
    Trace b = run_scenario(topo, sc, plan, 2024);
    std::ostringstream sa, sb;
    write_trace(a, sa);
    write_trace(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().size() > 1000);

    Trace c = run_scenario(topo, sc, plan, 2025);
    std::ostringstream sc_;
    write_trace(c, sc_);
    CHECK(sa.str() != sc_.str());
}

TEST_CASE("trace round-trips through the line-delimited format") {
    Topology topo = Topology::build(minimal_spec());
    ProbePlan plan = plan_probes(topo, topo.clients());
    Scenario sc;
    sc.horizon_epochs = 3;
    inject(sc, topo, {FaultKind::P2_ProcessCrash, {Kind::DataServer, 1}, 0, 2, 1.0});
    Trace a = run_scenario(topo, sc, plan, 5);

    std::stringstream buf, truth_buf;
    write_trace(a, buf);
    write_truth_sidecar(a, truth_buf);
    Trace b = read_trace(buf);
    auto truth = read_truth_sidecar(truth_buf);

    std::ostringstream sa, sb;
    write_trace(a, sa);
    b.truth = a.truth;  // sidecar travels separately
    write_trace(b, sb);
    CHECK(sa.str() == sb.str());
    REQUIRE(truth.size() == 1);
    CHECK(truth[0].fault.kind == FaultKind::P2_ProcessCrash);
    CHECK(truth[0].impacted_probes == a.truth[0].impacted_probes);
    CHECK(truth[0].impacted_probes > 0);
}

TEST_CASE("status fields satisfy the trace invariant") {
    Topology topo = Topology::build(ci_spec());
    auto monitors = topo.clients();
    monitors.resize(4);
    ProbePlan plan = plan_probes(topo, monitors);
    Scenario sc;
    sc.horizon_epochs = 5;
    inject(sc, topo, {FaultKind::P4_FailSlowMasked, {Kind::Osd, 2}, 0, 4, 1.0});
    inject(sc, topo, {FaultKind::P2_ProcessCrash, {Kind::Mds, 0}, 1, 4, 1.0});
    inject(sc, topo, {FaultKind::P3_Gray, {Kind::Osd, 9}, 0, 3, 0.8});
    Trace t = run_scenario(topo, sc, plan, 11);

    for (const auto& p : t.probes) {
        switch (p.status) {
            case ProbeStatus::Ok:
                CHECK(p.latency_ms <= t.slo_ms);
                break;
            case ProbeStatus::Slow:
                CHECK(p.latency_ms > t.slo_ms);
                CHECK(p.latency_ms <= t.timeout_ms);
                break;
            case ProbeStatus::Timeout:
                CHECK(p.latency_ms == t.timeout_ms);
                break;
            case ProbeStatus::Error:
                CHECK(p.latency_ms <= t.slo_ms);
                break;
        }
    }
}

TEST_CASE("adding a fault never reduces failures on paths through its target") {
    Topology topo = Topology::build(ci_spec());
    auto monitors = topo.clients();
    monitors.resize(4);
    ProbePlan plan = plan_probes(topo, monitors);

    std::mt19937_64 rng(404);
    const std::vector<FaultKind> kinds = {FaultKind::P1_FailStop, FaultKind::P2_ProcessCrash,
                                          FaultKind::P3_Gray, FaultKind::P4_FailSlowMasked,
                                          FaultKind::P5_Overload};
    for (int trial = 0; trial < 12; ++trial) {
        Scenario base;
        base.horizon_epochs = 5;
        // a couple of background faults (never on LNETs)
        std::vector<ComponentId> pool = topo.osds();
        auto servers = topo.data_servers();
        pool.insert(pool.end(), servers.begin(), servers.end());
        auto mds = topo.mds_servers();
        pool.insert(pool.end(), mds.begin(), mds.end());
        for (int b = 0; b < 2; ++b) {
            FaultSpec f{kinds[rng() % kinds.size()], pool[rng() % pool.size()], 0, 4,
                        0.3 + 0.7 * (static_cast<double>(rng() % 1000) / 1000.0)};
            inject(base, topo, f);
        }
        Scenario extended = base;
        FaultSpec extra{kinds[rng() % kinds.size()], pool[rng() % pool.size()], 0, 4, 1.0};
        inject(extended, topo, extra);

        const std::uint64_t seed = rng();
        Trace t0 = run_scenario(topo, base, plan, seed);
        Trace t1 = run_scenario(topo, extended, plan, seed);

        auto failures_through = [&](const Trace& t) {
            int n = 0;
            for (const auto& p : t.probes) {
                ProbePath path = topo.enumerate_path(p.monitor, p.target);
                auto comps = path.components();
                if (std::find(comps.begin(), comps.end(), extra.target) == comps.end()) continue;
                if (p.status != ProbeStatus::Ok) ++n;
            }
            return n;
        };
        CHECK(failures_through(t1) >= failures_through(t0));
    }
}

TEST_CASE("healthy servers draw loadavg from the baseline band") {
    Topology topo = Topology::build(ci_spec());
    Scenario sc;
    sc.horizon_epochs = 5;
    double sum = 0.0;
    int n = 0;
    for (int epoch = 0; epoch < 5; ++epoch) {
        auto side = emit_side_channels(topo, sc, epoch, 21);
        for (const auto& m : side.metrics) {
            if (!m.loadavg) continue;
            CHECK(*m.loadavg >= 0.0);
            CHECK(*m.loadavg < 110.0);  // far tail of N(30,10) is still sane
            sum += *m.loadavg;
            ++n;
        }
    }
    CHECK(n == 5 * 34);  // 32 DS + 2 MDS per epoch
    CHECK(std::abs(sum / n - 30.0) < 3.0);
}

TEST_CASE("P5 at severity 1.0 pushes loadavg means to 350+") {
    Topology topo = Topology::build(ci_spec());
    Scenario sc;
    sc.horizon_epochs = 20;
    const ComponentId ds{Kind::DataServer, 5};
    inject(sc, topo, {FaultKind::P5_Overload, ds, 0, 19, 1.0});
    double sum = 0.0;
    int n = 0;
    for (int epoch = 0; epoch < 20; ++epoch) {
        auto side = emit_side_channels(topo, sc, epoch, 22);
        for (const auto& m : side.metrics) {
            if (m.component == ds && m.loadavg) {
                sum += *m.loadavg;
                ++n;
            }
        }
    }
    REQUIRE(n == 20);
    CHECK(sum / n >= 350.0);
}

TEST_CASE("a P1 target emits a log template absent from all healthy peers") {
    Topology topo = Topology::build(ci_spec());
    Scenario sc;
    sc.horizon_epochs = 5;
    const ComponentId ds{Kind::DataServer, 5};
    inject(sc, topo, {FaultKind::P1_FailStop, ds, 0, 4, 1.0});
    auto side = emit_side_channels(topo, sc, 2, 23);

    LogNormalizer norm;
    auto templates = template_logs(side.logs, norm);
    REQUIRE(templates.count(ds));
    std::set<std::string> healthy_union;
    for (const auto& [id, tset] : templates) {
        if (id.kind == Kind::DataServer && id != ds) healthy_union.insert(tset.begin(), tset.end());
    }
    bool unique_found = false;
    for (const auto& t : templates[ds]) {
        if (!healthy_union.count(t)) unique_found = true;
    }
    CHECK(unique_found);

    // dead components emit no metrics and heartbeat down
    for (const auto& m : side.metrics) CHECK(m.component != ds);
    for (const auto& hb : side.heartbeats) {
        if (hb.component == ds) CHECK_FALSE(hb.up);
    }
}

TEST_CASE("full-shape plan emits 5,328 probes per epoch and 26,640 per window") {
    TopologySpec spec;
    spec.clients = 6;
    spec.mds = 6;
    spec.data_servers = 432;
    spec.osds = 432;
    spec.lnets = 36;
    spec.lnet_group_size = 4;
    spec.seed = 11;
    Topology topo = Topology::build(spec);
    ProbePlan plan = plan_probes(topo, topo.clients());
    CHECK(plan.count_of(OpKind::CrWr) == 72);
    CHECK(plan.count_of(OpKind::RmEx) == 72);
    CHECK(plan.count_of(OpKind::WrEx) == 5184);
    CHECK(plan.per_epoch() == 5328);

    Scenario sc;
    sc.horizon_epochs = 5;
    Trace t = run_scenario(topo, sc, plan, 1);
    CHECK(t.probes.size() == 26640);
}

TEST_CASE("zero-fault scenario stays under 0.5% timeouts") {
    Topology topo = Topology::build(ci_spec());
    auto monitors = topo.clients();
    monitors.resize(6);
    ProbePlan plan = plan_probes(topo, monitors);
    Scenario sc;
    sc.horizon_epochs = 5;
    Trace t = run_scenario(topo, sc, plan, 99);
    int bad = 0;
    for (const auto& p : t.probes) {
        if (p.status == ProbeStatus::Timeout) ++bad;
    }
    CHECK(static_cast<double>(bad) / static_cast<double>(t.probes.size()) < 0.005);
}

TEST_CASE("run_scenario rejects a plan from a different topology") {
    Topology big = Topology::build(ci_spec());
    Topology small = Topology::build(minimal_spec());
    auto monitors = big.clients();
    monitors.resize(4);
    ProbePlan plan = plan_probes(big, monitors);
    Scenario sc;
    sc.horizon_epochs = 2;
    CHECK_THROWS_AS(run_scenario(small, sc, plan, 1), ConfigError);
}
