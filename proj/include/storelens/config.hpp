// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "storelens/pipeline.hpp"

namespace storelens {

/// Desk-scale topology used by the test suite: 8 clients, 2 MDS, 32 data
/// servers (16 HA pairs), 32 OSDs, 8 LNETs.
PipelineConfig ci_scale_config();

/// Production-shaped topology: 93 monitor-eligible clients (4 login, 64
/// service, 25 import/export), 6 MDS, 432 data servers, 432 OSDs, 36 LNETs.
PipelineConfig full_scale_config();

/// Loads a pipeline config from a JSON file; unset fields keep the
/// `base` values (letting --scale presets act as defaults).
PipelineConfig load_config(const std::string& path, PipelineConfig base);

/// Serializes a config back to JSON (round-trips through load_config).
std::string dump_config(const PipelineConfig& cfg);

}  // namespace storelens
