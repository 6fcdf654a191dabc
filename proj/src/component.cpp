// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/component.hpp"

#include <array>
#include <cstdlib>

#include "storelens/errors.hpp"

namespace storelens {

namespace {

constexpr std::array<Kind, 8> kAllKinds = {
    Kind::Client,     Kind::ComputeNet, Kind::StorageNet, Kind::Lnet,
    Kind::Mds,        Kind::Mgs,        Kind::DataServer, Kind::Osd,
};

}  // namespace

const char* kind_prefix(Kind k) {
    switch (k) {
        case Kind::Client: return "C";
        case Kind::ComputeNet: return "CN";
        case Kind::StorageNet: return "SN";
        case Kind::Lnet: return "L";
        case Kind::Mds: return "MDS";
        case Kind::Mgs: return "MGS";
        case Kind::DataServer: return "DS";
        case Kind::Osd: return "OSD";
    }
    return "?";
}

std::string ComponentId::str() const {
    return kind_prefix(kind) + std::to_string(index);
}

ComponentId parse_component(const std::string& text) {
    std::size_t split = 0;
    while (split < text.size() && !(text[split] >= '0' && text[split] <= '9')) ++split;
    if (split == 0 || split == text.size()) {
        throw NotFoundError("malformed component id: " + text);
    }
    const std::string prefix = text.substr(0, split);
    // Longest prefixes first so "MDS" is not read as an "M".
    for (Kind k : kAllKinds) {
        if (prefix == kind_prefix(k)) {
            return ComponentId{k, static_cast<std::int32_t>(std::strtol(text.c_str() + split, nullptr, 10))};
        }
    }
    throw NotFoundError("unknown component kind in id: " + text);
}

}  // namespace storelens
