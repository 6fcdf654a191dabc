// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/topology.hpp"

#include <algorithm>
#include <set>

#include "storelens/errors.hpp"
#include "storelens/rng.hpp"

namespace storelens {

const char* client_class_name(ClientClass c) {
    switch (c) {
        case ClientClass::Generic: return "generic";
        case ClientClass::Login: return "login";
        case ClientClass::Service: return "service";
        case ClientClass::ImportExport: return "import_export";
    }
    return "?";
}

std::vector<ComponentId> ProbePath::components() const {
    std::vector<ComponentId> out = serial;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    out.push_back(target);
    return out;
}

Topology Topology::build(const TopologySpec& spec) {
    if (spec.clients < 1) throw SpecError("topology needs at least one monitor-eligible client");
    if (spec.mds < 1) throw SpecError("topology needs at least one metadata server");
    if (spec.osds < 1) throw SpecError("topology needs at least one OSD");
    if (spec.data_servers < 2) throw SpecError("topology needs at least one HA pair of data servers");
    if (spec.data_servers % 2 != 0) {
        throw PairingError("data-server count must be even for HA pairing, got " +
                           std::to_string(spec.data_servers));
    }
    if (spec.lnets < 1) throw SpecError("topology needs at least one LNET node");
    if (spec.lnet_group_size < 1 || spec.lnet_group_size > spec.lnets) {
        throw SpecError("LNET group size must be in [1, lnets]");
    }
    if (spec.lnets % spec.lnet_group_size != 0) {
        throw SpecError("LNET count must be a multiple of the group size");
    }
    if (spec.login_clients + spec.service_clients + spec.import_export_clients > spec.clients) {
        throw SpecError("client class counts exceed the client count");
    }
    if (spec.mgs < 0) throw SpecError("negative MGS count");

    Topology topo;
    topo.spec_ = spec;
    auto add = [&topo](Kind k, int n) {
        for (int i = 0; i < n; ++i) topo.components_.push_back({k, i});
    };
    add(Kind::Client, spec.clients);
    add(Kind::ComputeNet, 1);
    add(Kind::StorageNet, 1);
    add(Kind::Lnet, spec.lnets);
    add(Kind::Mds, spec.mds);
    add(Kind::Mgs, spec.mgs);
    add(Kind::DataServer, spec.data_servers);
    add(Kind::Osd, spec.osds);
    std::sort(topo.components_.begin(), topo.components_.end());

    for (int p = 0; p < spec.data_servers / 2; ++p) {
        topo.ha_pairs_.emplace_back(ComponentId{Kind::DataServer, 2 * p},
                                    ComponentId{Kind::DataServer, 2 * p + 1});
    }
    return topo;
}

bool Topology::contains(const ComponentId& id) const {
    return std::binary_search(components_.begin(), components_.end(), id);
}

namespace {

std::vector<ComponentId> of_kind(Kind k, int n) {
    std::vector<ComponentId> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back({k, i});
    return out;
}

}  // namespace

std::vector<ComponentId> Topology::clients() const { return of_kind(Kind::Client, spec_.clients); }
std::vector<ComponentId> Topology::mds_servers() const { return of_kind(Kind::Mds, spec_.mds); }
std::vector<ComponentId> Topology::data_servers() const {
    return of_kind(Kind::DataServer, spec_.data_servers);
}
std::vector<ComponentId> Topology::osds() const { return of_kind(Kind::Osd, spec_.osds); }
std::vector<ComponentId> Topology::lnets() const { return of_kind(Kind::Lnet, spec_.lnets); }

ClientClass Topology::client_class(const ComponentId& client) const {
    if (client.kind != Kind::Client || !contains(client)) {
        throw NotFoundError("unknown client: " + client.str());
    }
    int i = client.index;
    if (i < spec_.login_clients) return ClientClass::Login;
    i -= spec_.login_clients;
    if (i < spec_.service_clients) return ClientClass::Service;
    i -= spec_.service_clients;
    if (i < spec_.import_export_clients) return ClientClass::ImportExport;
    return ClientClass::Generic;
}

const std::pair<ComponentId, ComponentId>& Topology::osd_owners(const ComponentId& osd) const {
    if (osd.kind != Kind::Osd || !contains(osd)) throw NotFoundError("unknown OSD: " + osd.str());
    return ha_pairs_[static_cast<std::size_t>(osd.index) % ha_pairs_.size()];
}

ComponentId Topology::osd_primary(const ComponentId& osd) const {
    const auto& pair = osd_owners(osd);
    // Alternate primaries across the OSDs of a pair to balance load.
    int round = osd.index / static_cast<int>(ha_pairs_.size());
    return (round % 2 == 0) ? pair.first : pair.second;
}

ComponentId Topology::osd_secondary(const ComponentId& osd) const {
    const auto& pair = osd_owners(osd);
    ComponentId primary = osd_primary(osd);
    return primary == pair.first ? pair.second : pair.first;
}

std::vector<ComponentId> Topology::lnet_group(const ComponentId& client,
                                              const ComponentId& target) const {
    if (client.kind != Kind::Client || !contains(client)) {
        throw NotFoundError("unknown client: " + client.str());
    }
    if (!contains(target)) throw NotFoundError("unknown target: " + target.str());
    const int blocks = spec_.lnets / spec_.lnet_group_size;
    const auto block = static_cast<int>(
        mix_seed(spec_.seed, component_tag(client), component_tag(target), 0x11ULL) %
        static_cast<std::uint64_t>(blocks));
    std::vector<ComponentId> group;
    group.reserve(static_cast<std::size_t>(spec_.lnet_group_size));
    for (int j = 0; j < spec_.lnet_group_size; ++j) {
        group.push_back({Kind::Lnet, block * spec_.lnet_group_size + j});
    }
    return group;
}

int Topology::lnet_offset(const ComponentId& client, const ComponentId& target) const {
    return static_cast<int>(
        mix_seed(spec_.seed, component_tag(client), component_tag(target), 0x22ULL) %
        static_cast<std::uint64_t>(spec_.lnet_group_size));
}

ComponentId Topology::domain_mds(int domain) const {
    if (domain < 0 || domain >= spec_.mds) throw NotFoundError("unknown domain");
    return {Kind::Mds, domain};
}

int Topology::domain_of(const ComponentId& id) const {
    switch (id.kind) {
        case Kind::Mds: return id.index;
        case Kind::DataServer: return (id.index / 2) % spec_.mds;
        case Kind::Osd: return (id.index % static_cast<int>(ha_pairs_.size())) % spec_.mds;
        default: return 0;
    }
}

ProbePath Topology::enumerate_path(const ComponentId& client, const ComponentId& target) const {
    if (client.kind != Kind::Client) throw NotFoundError("path source must be a client: " + client.str());
    if (!contains(client)) throw NotFoundError("unknown client: " + client.str());
    if (!contains(target)) throw NotFoundError("unknown target: " + target.str());
    if (target.kind != Kind::Osd && target.kind != Kind::Mds && target.kind != Kind::DataServer) {
        throw NotFoundError("probe target must be an OSD, data server or MDS: " + target.str());
    }

    ProbePath path;
    path.client = client;
    path.target = target;
    path.serial = {client, {Kind::ComputeNet, 0}, {Kind::StorageNet, 0}};
    path.groups.push_back(lnet_group(client, target));
    if (target.kind == Kind::Osd) {
        const auto& pair = osd_owners(target);
        path.groups.push_back({pair.first, pair.second});
    }
    return path;
}

std::vector<ComponentId> Topology::probe_targets() const {
    std::vector<ComponentId> targets = mds_servers();
    auto ds = data_servers();
    targets.insert(targets.end(), ds.begin(), ds.end());
    auto os = osds();
    targets.insert(targets.end(), os.begin(), os.end());
    return targets;
}

namespace {

// A path can route through v while avoiding F iff its serial components and
// target stay clear of F and every redundancy group keeps at least one
// member outside F (groups containing v may route through v itself).
bool covers_avoiding(const ProbePath& path, const ComponentId& v,
                     const std::vector<ComponentId>& fset) {
    auto in_f = [&fset](const ComponentId& id) {
        return std::find(fset.begin(), fset.end(), id) != fset.end();
    };
    bool touches = path.target == v;
    for (const auto& s : path.serial) {
        if (in_f(s)) return false;
        touches = touches || s == v;
    }
    if (in_f(path.target)) return false;
    for (const auto& g : path.groups) {
        bool viable = false;
        for (const auto& m : g) {
            if (m == v) {
                viable = true;  // v itself carries the route; v is not in F
                touches = true;
                break;
            }
            if (!in_f(m)) viable = true;
        }
        if (!viable) return false;
    }
    return touches;
}

std::uint64_t count_subsets_up_to(std::size_t n, int k) {
    std::uint64_t total = 0, binom = 1;
    for (int i = 0; i <= k; ++i) {
        total += binom;
        if (total > (1ULL << 62)) return total;
        binom = binom * (n - static_cast<std::uint64_t>(i)) / (static_cast<std::uint64_t>(i) + 1);
    }
    return total;
}

}  // namespace

IdentifiabilityResult check_identifiability(const Topology& topo,
                                            const std::vector<ComponentId>& monitors, int k,
                                            std::size_t sample_budget) {
    if (k < 1) throw ConfigError("identifiability requires k >= 1");
    if (static_cast<std::size_t>(k) > topo.components().size()) {
        throw ConfigError("k exceeds the component count");
    }
    for (const auto& m : monitors) {
        if (m.kind != Kind::Client || !topo.contains(m)) {
            throw NotFoundError("monitor is not a client of this topology: " + m.str());
        }
    }

    // Nodes that must stay coverable: every probe-reachable non-client
    // component. Candidate failure sets range over the redundancy-bearing
    // storage units; aggregate network segments failing are reported as
    // network-wide outages rather than localized.
    std::vector<ComponentId> coverable = {{Kind::ComputeNet, 0}, {Kind::StorageNet, 0}};
    std::vector<ComponentId> failable;
    for (const auto& c : topo.lnets()) failable.push_back(c);
    for (const auto& c : topo.mds_servers()) failable.push_back(c);
    for (const auto& c : topo.data_servers()) failable.push_back(c);
    for (const auto& c : topo.osds()) failable.push_back(c);
    coverable.insert(coverable.end(), failable.begin(), failable.end());

    std::vector<ProbePath> paths;
    for (const auto& m : monitors) {
        for (const auto& t : topo.probe_targets()) paths.push_back(topo.enumerate_path(m, t));
    }

    auto covered = [&paths](const ComponentId& v, const std::vector<ComponentId>& fset) {
        for (const auto& p : paths) {
            if (covers_avoiding(p, v, fset)) return true;
        }
        return false;
    };

    IdentifiabilityResult result;
    result.identifiable = true;

    const std::uint64_t exact_sets = count_subsets_up_to(failable.size(), k);
    result.exact = exact_sets <= sample_budget;

    for (const auto& v : coverable) {
        std::vector<ComponentId> pool;
        pool.reserve(failable.size());
        for (const auto& f : failable) {
            if (f != v) pool.push_back(f);
        }

        const int max_size = std::min<int>(k, static_cast<int>(pool.size()));
        if (result.exact) {
            // Enumerate F by ascending size so the first failing witness is
            // one of minimal cardinality.
            for (int size = 0; size <= max_size; ++size) {
                std::vector<std::size_t> idx(static_cast<std::size_t>(size));
                for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
                bool more = true;
                while (more) {
                    std::vector<ComponentId> fset;
                    fset.reserve(idx.size());
                    for (std::size_t i : idx) fset.push_back(pool[i]);
                    if (!covered(v, fset)) {
                        result.identifiable = false;
                        result.witness = {v, fset};
                        return result;
                    }
                    // next combination
                    more = false;
                    for (int i = size - 1; i >= 0; --i) {
                        auto ui = static_cast<std::size_t>(i);
                        if (idx[ui] + (static_cast<std::size_t>(size) - ui) < pool.size()) {
                            ++idx[ui];
                            for (std::size_t j = ui + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
                            more = true;
                            break;
                        }
                    }
                }
            }
        } else {
            // Coverage is anti-monotone in F, so sampling sets of the
            // maximal size k dominates all subsets.
            if (!covered(v, {})) {
                result.identifiable = false;
                result.witness = {v, {}};
                return result;
            }
            std::mt19937_64 rng = substream(topo.seed(), 0x1DULL, component_tag(v));
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const std::size_t per_v = std::max<std::size_t>(1, sample_budget / coverable.size());
            for (std::size_t s = 0; s < per_v; ++s) {
                std::set<ComponentId> fs;
                while (fs.size() < static_cast<std::size_t>(max_size)) fs.insert(pool[pick(rng)]);
                std::vector<ComponentId> fset(fs.begin(), fs.end());
                if (!covered(v, fset)) {
                    result.identifiable = false;
                    result.witness = {v, fset};
                    return result;
                }
            }
        }
    }
    return result;
}

}  // namespace storelens
