// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <tuple>

#include "storelens/errors.hpp"
#include "storelens/observation.hpp"
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

TopologySpec full_shape_spec() {
    TopologySpec s;
    s.clients = 93;
    s.login_clients = 4;
    s.service_clients = 64;
    s.import_export_clients = 25;
    s.mds = 6;
    s.data_servers = 432;
    s.osds = 432;
    s.lnets = 36;
    s.lnet_group_size = 4;
    s.seed = 11;
    return s;
}

}  // namespace

TEST_CASE("select_monitors on the production shape: all login + 1 service + 1 I/E") {
    Topology topo = Topology::build(full_shape_spec());
    auto monitors = select_monitors(topo, topo.clients(), 6, 1);
    REQUIRE(monitors.size() == 6);
    int login = 0, service = 0, ie = 0;
    for (const auto& m : monitors) {
        switch (topo.client_class(m)) {
            case ClientClass::Login: ++login; break;
            case ClientClass::Service: ++service; break;
            case ClientClass::ImportExport: ++ie; break;
            default: break;
        }
    }
    CHECK(login == 4);
    CHECK(service == 1);
    CHECK(ie == 1);
    CHECK(check_identifiability(topo, monitors, 1).identifiable);
}

TEST_CASE("select_monitors minimal topology picks the only client") {
    Topology topo = Topology::build(minimal_spec());
    auto monitors = select_monitors(topo, topo.clients(), 1, 1);
    CHECK(monitors == std::vector<ComponentId>{{Kind::Client, 0}});
}

TEST_CASE("select_monitors rejects an empty budget") {
    Topology topo = Topology::build(minimal_spec());
    CHECK_THROWS_AS(select_monitors(topo, topo.clients(), 0, 1), InfeasibleError);
}

TEST_CASE("select_monitors reports the smallest witness when infeasible") {
    TopologySpec s = minimal_spec();
    s.lnets = 2;
    s.lnet_group_size = 2;  // k=2 can bury the whole LNET block
    Topology topo = Topology::build(s);
    CHECK_THROWS_AS(select_monitors(topo, topo.clients(), 1, 2), InfeasibleError);
    try {
        select_monitors(topo, topo.clients(), 1, 2);
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("witness") != std::string::npos);
    }
}

TEST_CASE("plan invariants: every planned pair appears the right number of times") {
    Topology topo = Topology::build(full_shape_spec());
    std::vector<ComponentId> monitors;
    for (int i = 0; i < 6; ++i) monitors.push_back({Kind::Client, i});
    ProbePlan plan = plan_probes(topo, monitors);

    std::map<std::tuple<ComponentId, ComponentId, OpKind>, int> pair_counts;
    for (const auto& e : plan.entries) pair_counts[{e.monitor, e.target, e.op}]++;
    for (const auto& m : monitors) {
        for (const auto& mds : topo.mds_servers()) {
            CHECK(pair_counts[{m, mds, OpKind::CrWr}] == 2);  // memory + disk flavors
            CHECK(pair_counts[{m, mds, OpKind::RmEx}] == 2);
        }
        for (const auto& osd : topo.osds()) CHECK(pair_counts[{m, osd, OpKind::WrEx}] == 1);
        for (const auto& ds : topo.data_servers()) CHECK(pair_counts[{m, ds, OpKind::WrEx}] == 1);
    }
}

TEST_CASE("plan count formula holds for arbitrary topologies") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        TopologySpec s;
        s.clients = 1 + static_cast<int>(rng() % 5);
        s.mds = 1 + static_cast<int>(rng() % 4);
        s.data_servers = 2 * (1 + static_cast<int>(rng() % 8));
        s.osds = 1 + static_cast<int>(rng() % 12);
        s.lnet_group_size = 1 + static_cast<int>(rng() % 4);
        s.lnets = s.lnet_group_size * (1 + static_cast<int>(rng() % 3));
        s.seed = rng();
        Topology topo = Topology::build(s);
        std::vector<ComponentId> monitors;
        const int m = 1 + static_cast<int>(rng() % s.clients);
        for (int i = 0; i < m; ++i) monitors.push_back({Kind::Client, i});
        ProbePlan plan = plan_probes(topo, monitors);

        const auto M = static_cast<std::size_t>(m);
        CHECK(plan.count_of(OpKind::CrWr) == 2 * M * static_cast<std::size_t>(s.mds));
        CHECK(plan.count_of(OpKind::RmEx) == 2 * M * static_cast<std::size_t>(s.mds));
        CHECK(plan.count_of(OpKind::WrEx) ==
              M * static_cast<std::size_t>(s.data_servers + s.osds));
    }
}

TEST_CASE("100-monitor plan scales linearly") {
    TopologySpec s = full_shape_spec();
    s.clients = 100;
    s.login_clients = s.service_clients = s.import_export_clients = 0;
    Topology topo = Topology::build(s);
    ProbePlan plan = plan_probes(topo, topo.clients(), 30);
    CHECK(plan.interval_s == 30);
    CHECK(plan.count_of(OpKind::CrWr) == 100 * 2 * 6);
    CHECK(plan.count_of(OpKind::WrEx) == 100 * (432 + 432));
}

TEST_CASE("aggregate pools a window into per-path Binomial observations") {
    Topology topo = Topology::build(minimal_spec());
    ProbePlan plan = plan_probes(topo, topo.clients());

    Trace trace;
    trace.slo_ms = 1000;
    trace.timeout_ms = 30000;
    const ComponentId c{Kind::Client, 0};
    const ComponentId osd{Kind::Osd, 0};
    for (int epoch = 0; epoch < 5; ++epoch) {
        ProbeResult p;
        p.epoch = epoch;
        p.monitor = c;
        p.target = osd;
        p.op = OpKind::WrEx;
        p.flavor = ProbeFlavor::Disk;
        p.latency_ms = (epoch < 2) ? 30000.0 : 20.0;
        p.status = (epoch < 2) ? ProbeStatus::Timeout : ProbeStatus::Ok;
        trace.probes.push_back(p);
    }
    auto result = aggregate(trace, plan, 0);
    REQUIRE(result.observations.size() == 1);
    CHECK(result.observations[0].probes_sent == 5);
    CHECK(result.observations[0].successes == 3);
    // the minimal plan has 4 more planned pairs with no records: MDS, 2 DS
    CHECK(result.missing_pairs.size() == 3);
}

TEST_CASE("aggregation is a partition of the window's probe records") {
    Topology topo = Topology::build(full_shape_spec());
    std::vector<ComponentId> monitors;
    for (int i = 0; i < 6; ++i) monitors.push_back({Kind::Client, i});
    ProbePlan plan = plan_probes(topo, monitors);
    Scenario sc;
    sc.horizon_epochs = 5;
    Trace t = run_scenario(topo, sc, plan, 77);

    auto result = aggregate(t, plan, 0);
    CHECK(result.missing_pairs.empty());
    std::size_t total = 0;
    for (const auto& obs : result.observations) {
        total += static_cast<std::size_t>(obs.probes_sent);
        CHECK(obs.successes <= obs.probes_sent);
        CHECK(obs.probes_sent > 0);
    }
    CHECK(total == t.probes.size());
    CHECK(total == 26640);  // 5-minute window of the production-shaped plan
}

TEST_CASE("aggregate leaves probes outside the window alone") {
    Topology topo = Topology::build(minimal_spec());
    ProbePlan plan = plan_probes(topo, topo.clients());
    Scenario sc;
    sc.horizon_epochs = 10;
    Trace t = run_scenario(topo, sc, plan, 3);
    auto w0 = aggregate(t, plan, 0);
    auto w1 = aggregate(t, plan, 1);
    std::size_t n0 = 0, n1 = 0;
    for (const auto& o : w0.observations) n0 += static_cast<std::size_t>(o.probes_sent);
    for (const auto& o : w1.observations) n1 += static_cast<std::size_t>(o.probes_sent);
    CHECK(n0 + n1 == t.probes.size());
    CHECK(n0 == n1);
}
