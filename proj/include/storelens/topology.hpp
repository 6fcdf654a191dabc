// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "storelens/component.hpp"

namespace storelens {

/// Monitor-eligibility class of a client node. Classes differ in where the
/// node sits operationally (login vs. scheduling vs. bulk data movement);
/// probe paths are shaped identically for all of them.
enum class ClientClass : std::uint8_t { Generic, Login, Service, ImportExport };

const char* client_class_name(ClientClass c);

/// Shape parameters for a cluster. Data servers pair up into active-active
/// HA pairs; OSDs are spread round-robin over the pairs; every
/// (client, target) pair is assigned a fixed group of `lnet_group_size`
/// forwarding nodes, deterministically from `seed`.
struct TopologySpec {
    int clients = 1;
    int login_clients = 0;          // leading client indices, then service,
    int service_clients = 0;        // then import/export; rest are generic
    int import_export_clients = 0;
    int mds = 1;
    int data_servers = 2;
    int osds = 1;
    int lnets = 4;
    int lnet_group_size = 4;
    int mgs = 0;
    std::uint64_t seed = 0;
};

/// A probe path from a monitor client to a target component. Serial
/// components must all be healthy for the probe to succeed; each redundancy
/// group needs at least one healthy member; the target terminates the path.
struct ProbePath {
    ComponentId client;
    ComponentId target;
    std::vector<ComponentId> serial;                // client, networks (ordered)
    std::vector<std::vector<ComponentId>> groups;   // LNET group; HA pair for data OSDs

    /// All components referenced by the path, serial + groups + target.
    std::vector<ComponentId> components() const;
};

/// Immutable component graph. Safe to share read-only across concurrent
/// scenario runs.
class Topology {
  public:
    static Topology build(const TopologySpec& spec);

    const TopologySpec& spec() const { return spec_; }
    std::uint64_t seed() const { return spec_.seed; }

    const std::vector<ComponentId>& components() const { return components_; }
    bool contains(const ComponentId& id) const;

    int num_clients() const { return spec_.clients; }
    int num_mds() const { return spec_.mds; }
    int num_data_servers() const { return spec_.data_servers; }
    int num_osds() const { return spec_.osds; }
    int num_lnets() const { return spec_.lnets; }
    int lnet_group_size() const { return spec_.lnet_group_size; }

    std::vector<ComponentId> clients() const;
    std::vector<ComponentId> mds_servers() const;
    std::vector<ComponentId> data_servers() const;
    std::vector<ComponentId> osds() const;
    std::vector<ComponentId> lnets() const;

    ClientClass client_class(const ComponentId& client) const;

    /// HA pairs in index order; pair p = (DS 2p, DS 2p+1).
    const std::vector<std::pair<ComponentId, ComponentId>>& ha_pairs() const { return ha_pairs_; }

    /// The HA pair owning a data OSD.
    const std::pair<ComponentId, ComponentId>& osd_owners(const ComponentId& osd) const;

    /// The pair member that serves an OSD when both are healthy.
    ComponentId osd_primary(const ComponentId& osd) const;
    ComponentId osd_secondary(const ComponentId& osd) const;

    /// Fixed LNET group for a (client, target) pair; target is an OSD, a
    /// data server, or an MDS. Seed-deterministic.
    std::vector<ComponentId> lnet_group(const ComponentId& client, const ComponentId& target) const;

    /// Stable per-(client, target) offset used to start round-robin routing
    /// inside the LNET group.
    int lnet_offset(const ComponentId& client, const ComponentId& target) const;

    /// Filesystem domains: one per MDS. Data-server pairs (and their OSDs)
    /// are spread round-robin over the domains.
    int num_domains() const { return spec_.mds; }
    ComponentId domain_mds(int domain) const;
    int domain_of(const ComponentId& id) const;

    /// Deterministic, pure path enumeration. Target must be an OSD, a data
    /// server (server-memory probes) or an MDS. Throws NotFoundError for
    /// unknown ids.
    ProbePath enumerate_path(const ComponentId& client, const ComponentId& target) const;

    /// All probe targets, in plan order: MDSs, data servers, OSDs.
    std::vector<ComponentId> probe_targets() const;

  private:
    Topology() = default;

    TopologySpec spec_;
    std::vector<ComponentId> components_;  // sorted
    std::vector<std::pair<ComponentId, ComponentId>> ha_pairs_;
};

/// Outcome of the sufficient-identifiability check. When the condition
/// fails, `witness` holds a (v, F) pair with no measurement path through v
/// avoiding F; `exact` records whether failure sets were enumerated
/// exhaustively or sampled.
struct IdentifiabilityResult {
    bool identifiable = false;
    std::optional<std::pair<ComponentId, std::vector<ComponentId>>> witness;
    bool exact = true;
};

/// Checks that any set of up to k unhealthy storage units remains
/// localizable from the given monitors: for every coverable component v and
/// every candidate failure set F (|F| <= k, v not in F, F drawn from the
/// redundancy-bearing units: LNETs, MDSs, data servers, OSDs), some
/// monitored path routes through v while avoiding F. Exhaustive when the
/// number of failure sets is within `sample_budget`, sampled otherwise.
IdentifiabilityResult check_identifiability(const Topology& topo,
                                            const std::vector<ComponentId>& monitors, int k,
                                            std::size_t sample_budget = 200000);

}  // namespace storelens
