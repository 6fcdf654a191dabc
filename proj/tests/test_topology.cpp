// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "storelens/errors.hpp"
#include "storelens/rng.hpp"
#include "storelens/topology.hpp"

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
    s.clients = 6;
    s.mds = 6;
    s.data_servers = 432;
    s.osds = 432;
    s.lnets = 36;
    s.lnet_group_size = 4;
    s.seed = 11;
    return s;
}

// Independent identifiability oracle: expand every redundancy-group choice
// into concrete routes and test route membership / disjointness literally.
std::vector<std::vector<ComponentId>> expand_routes(const ProbePath& path) {
    std::vector<std::vector<ComponentId>> routes{path.serial};
    for (const auto& group : path.groups) {
        std::vector<std::vector<ComponentId>> next;
        for (const auto& r : routes) {
            for (const auto& member : group) {
                auto extended = r;
                extended.push_back(member);
                next.push_back(std::move(extended));
            }
        }
        routes = std::move(next);
    }
    for (auto& r : routes) r.push_back(path.target);
    return routes;
}

bool oracle_identifiable(const Topology& topo, const std::vector<ComponentId>& monitors, int k,
                         std::pair<ComponentId, std::vector<ComponentId>>* witness = nullptr) {
    std::vector<std::vector<ComponentId>> routes;
    for (const auto& m : monitors) {
        for (const auto& t : topo.probe_targets()) {
            for (auto& r : expand_routes(topo.enumerate_path(m, t))) routes.push_back(std::move(r));
        }
    }
    std::vector<ComponentId> coverable = {{Kind::ComputeNet, 0}, {Kind::StorageNet, 0}};
    std::vector<ComponentId> failable;
    for (const auto& c : topo.lnets()) failable.push_back(c);
    for (const auto& c : topo.mds_servers()) failable.push_back(c);
    for (const auto& c : topo.data_servers()) failable.push_back(c);
    for (const auto& c : topo.osds()) failable.push_back(c);
    coverable.insert(coverable.end(), failable.begin(), failable.end());

    auto route_ok = [](const std::vector<ComponentId>& route, const ComponentId& v,
                       const std::vector<ComponentId>& fset) {
        if (std::find(route.begin(), route.end(), v) == route.end()) return false;
        for (const auto& f : fset) {
            if (std::find(route.begin(), route.end(), f) != route.end()) return false;
        }
        return true;
    };

    for (const auto& v : coverable) {
        std::vector<ComponentId> pool;
        for (const auto& f : failable) {
            if (f != v) pool.push_back(f);
        }
        const int max_size = std::min<int>(k, static_cast<int>(pool.size()));
        std::vector<std::vector<ComponentId>> fsets{{}};
        // all subsets of size <= k, breadth-first by size
        std::vector<std::vector<std::size_t>> frontier{{}};
        for (int size = 1; size <= max_size; ++size) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& idxs : frontier) {
                const std::size_t start = idxs.empty() ? 0 : idxs.back() + 1;
                for (std::size_t i = start; i < pool.size(); ++i) {
                    auto extended = idxs;
                    extended.push_back(i);
                    next.push_back(extended);
                }
            }
            for (const auto& idxs : next) {
                std::vector<ComponentId> fs;
                for (std::size_t i : idxs) fs.push_back(pool[i]);
                fsets.push_back(fs);
            }
            frontier = std::move(next);
        }
        for (const auto& fs : fsets) {
            bool any = false;
            for (const auto& r : routes) {
                if (route_ok(r, v, fs)) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                if (witness) *witness = {v, fs};
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("full-shape topology builds 216 HA pairs with every OSD owned") {
    Topology topo = Topology::build(full_shape_spec());
    CHECK(topo.ha_pairs().size() == 216);
    for (const auto& osd : topo.osds()) {
        const auto& pair = topo.osd_owners(osd);
        CHECK(topo.contains(pair.first));
        CHECK(topo.contains(pair.second));
        CHECK(pair.first.kind == Kind::DataServer);
        CHECK(pair.second.kind == Kind::DataServer);
    }
}

TEST_CASE("minimal topology is valid") {
    Topology topo = Topology::build(minimal_spec());
    CHECK(topo.ha_pairs().size() == 1);
    CHECK(topo.components().size() == 11);  // C, CN, SN, 4xL, MDS, 2xDS, OSD
}

TEST_CASE("odd data-server count raises PairingError") {
    TopologySpec s = minimal_spec();
    s.data_servers = 3;
    CHECK_THROWS_AS(Topology::build(s), PairingError);
}

TEST_CASE("zero clients raises SpecError") {
    TopologySpec s = minimal_spec();
    s.clients = 0;
    CHECK_THROWS_AS(Topology::build(s), SpecError);
}

TEST_CASE("enumerate_path shape for data and metadata targets") {
    Topology topo = Topology::build(minimal_spec());
    const ComponentId c1{Kind::Client, 0};

    ProbePath data = topo.enumerate_path(c1, {Kind::Osd, 0});
    CHECK(data.serial == std::vector<ComponentId>{c1, {Kind::ComputeNet, 0}, {Kind::StorageNet, 0}});
    REQUIRE(data.groups.size() == 2);
    CHECK(data.groups[0].size() == 4);  // LNET group
    CHECK(data.groups[1] == std::vector<ComponentId>{{Kind::DataServer, 0}, {Kind::DataServer, 1}});
    CHECK(data.target == ComponentId{Kind::Osd, 0});

    ProbePath meta = topo.enumerate_path(c1, {Kind::Mds, 0});
    CHECK(meta.target == ComponentId{Kind::Mds, 0});
    REQUIRE(meta.groups.size() == 1);  // LNET group only; the MDS terminates serially

    ProbePath server = topo.enumerate_path(c1, {Kind::DataServer, 1});
    CHECK(server.target == ComponentId{Kind::DataServer, 1});
    CHECK(server.groups.size() == 1);  // no HA redundancy on the server-memory path

    CHECK_THROWS_AS(topo.enumerate_path({Kind::Client, 9}, {Kind::Osd, 0}), NotFoundError);
    CHECK_THROWS_AS(topo.enumerate_path(c1, {Kind::Osd, 5}), NotFoundError);
}

TEST_CASE("enumerate_path is deterministic and pure") {
    Topology topo = Topology::build(full_shape_spec());
    const ComponentId c{Kind::Client, 3};
    const ComponentId osd{Kind::Osd, 17};
    ProbePath a = topo.enumerate_path(c, osd);
    ProbePath b = topo.enumerate_path(c, osd);
    CHECK(a.serial == b.serial);
    CHECK(a.groups == b.groups);
    CHECK(a.target == b.target);

    Topology topo2 = Topology::build(full_shape_spec());
    ProbePath c2 = topo2.enumerate_path(c, osd);
    CHECK(a.groups == c2.groups);
}

TEST_CASE("every path component exists in the topology (random specs)") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        TopologySpec s;
        s.clients = 1 + static_cast<int>(rng() % 4);
        s.mds = 1 + static_cast<int>(rng() % 3);
        s.data_servers = 2 * (1 + static_cast<int>(rng() % 6));
        s.osds = 1 + static_cast<int>(rng() % 8);
        s.lnet_group_size = 1 + static_cast<int>(rng() % 4);
        s.lnets = s.lnet_group_size * (1 + static_cast<int>(rng() % 3));
        s.seed = rng();
        Topology topo = Topology::build(s);
        for (const auto& client : topo.clients()) {
            for (const auto& target : topo.probe_targets()) {
                ProbePath p = topo.enumerate_path(client, target);
                for (const auto& comp : p.components()) CHECK(topo.contains(comp));
            }
        }
    }
}

TEST_CASE("lnet groups have exactly G members for every (client, target)") {
    Topology topo = Topology::build(full_shape_spec());
    for (const auto& client : topo.clients()) {
        for (const auto& osd : topo.osds()) {
            auto g = topo.lnet_group(client, osd);
            CHECK(g.size() == 4);
            std::set<ComponentId> uniq(g.begin(), g.end());
            CHECK(uniq.size() == 4);
        }
    }
}

TEST_CASE("identifiability: minimal topology with one monitor, k=1") {
    Topology topo = Topology::build(minimal_spec());
    auto res = check_identifiability(topo, {{Kind::Client, 0}}, 1);
    CHECK(res.identifiable);
    CHECK(res.exact);
    CHECK(oracle_identifiable(topo, {{Kind::Client, 0}}, 1));
}

TEST_CASE("identifiability: no monitors means nothing is coverable") {
    Topology topo = Topology::build(minimal_spec());
    auto res = check_identifiability(topo, {}, 1);
    CHECK_FALSE(res.identifiable);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->second.empty());  // already fails on the empty failure set
    CHECK_FALSE(oracle_identifiable(topo, {}, 1));
}

TEST_CASE("identifiability: k above the component count is a ConfigError") {
    Topology topo = Topology::build(minimal_spec());
    CHECK_THROWS_AS(check_identifiability(topo, {{Kind::Client, 0}}, 99), ConfigError);
}

TEST_CASE("identifiability matches route-expansion oracle on all small topologies") {
    // Small spec grid, all instances with at most 20 components.
    int checked = 0;
    for (int clients : {1, 2}) {
        for (int mds : {1, 2}) {
            for (int ds : {2, 4}) {
                for (int osds : {1, 2}) {
                    for (int lnets : {2, 4}) {
                        for (int g : {2, 4}) {
                            if (g > lnets || lnets % g != 0) continue;
                            TopologySpec s;
                            s.clients = clients;
                            s.mds = mds;
                            s.data_servers = ds;
                            s.osds = osds;
                            s.lnets = lnets;
                            s.lnet_group_size = g;
                            s.seed = 5;
                            if (clients + 2 + mds + ds + osds + lnets > 20) continue;
                            Topology topo = Topology::build(s);
                            for (int k : {1, 2}) {
                                for (int mcount : {0, 1, clients}) {
                                    std::vector<ComponentId> monitors;
                                    for (int i = 0; i < mcount; ++i) {
                                        monitors.push_back({Kind::Client, i});
                                    }
                                    auto res = check_identifiability(topo, monitors, k);
                                    CHECK(res.exact);
                                    const bool oracle = oracle_identifiable(topo, monitors, k);
                                    CHECK(res.identifiable == oracle);
                                    ++checked;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("identifiability: a group-sized failure set defeats shared LNET blocks") {
    // With only one LNET block, k=2 can bury a whole group when G=2.
    TopologySpec s = minimal_spec();
    s.lnets = 2;
    s.lnet_group_size = 2;
    Topology topo = Topology::build(s);
    auto res = check_identifiability(topo, {{Kind::Client, 0}}, 2);
    CHECK_FALSE(res.identifiable);
    REQUIRE(res.witness.has_value());
    std::pair<ComponentId, std::vector<ComponentId>> witness;
    CHECK_FALSE(oracle_identifiable(topo, {{Kind::Client, 0}}, 2, &witness));
}

TEST_CASE("domains partition data servers by pair") {
    Topology topo = Topology::build(full_shape_spec());
    for (const auto& ds : topo.data_servers()) {
        const int d = topo.domain_of(ds);
        CHECK(d >= 0);
        CHECK(d < topo.num_domains());
    }
    // Pair members stay in one domain.
    for (const auto& [a, b] : topo.ha_pairs()) CHECK(topo.domain_of(a) == topo.domain_of(b));
    // OSDs inherit their pair's domain.
    for (const auto& osd : topo.osds()) {
        CHECK(topo.domain_of(osd) == topo.domain_of(topo.osd_owners(osd).first));
    }
}
