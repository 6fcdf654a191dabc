// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace storelens {

/// Storage-cluster component roles. LNET nodes bridge the compute and
/// storage networks; OSDs are the RAID-backed disk arrays behind the
/// data-server HA pairs.
enum class Kind : std::uint8_t {
    Client,
    ComputeNet,
    StorageNet,
    Lnet,
    Mds,
    Mgs,
    DataServer,
    Osd,
};

const char* kind_prefix(Kind k);

/// Identity of one component: (kind, index), unique within a Topology.
struct ComponentId {
    Kind kind{Kind::Client};
    std::int32_t index{0};

    auto operator<=>(const ComponentId&) const = default;

    std::string str() const;
};

/// Parses the textual form emitted by ComponentId::str() ("DS17", "OSD3",
/// "C0", "L5", "MDS1", "MGS0", "CN0", "SN0"). Throws NotFoundError on
/// malformed input.
ComponentId parse_component(const std::string& text);

struct ComponentIdHash {
    std::size_t operator()(const ComponentId& id) const {
        return std::hash<std::uint64_t>{}(
            (static_cast<std::uint64_t>(id.kind) << 32) ^ static_cast<std::uint32_t>(id.index));
    }
};

inline std::uint64_t component_tag(const ComponentId& id) {
    return (static_cast<std::uint64_t>(id.kind) << 32) ^ static_cast<std::uint32_t>(id.index);
}

}  // namespace storelens
