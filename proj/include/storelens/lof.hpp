// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace storelens {

/// Local outlier factor scores (reachability-distance / local-reachability-
/// density formulation) with the textbook >=k tie-inclusive neighborhoods.
/// Inliers score near 1, outliers well above it. Points whose whole
/// neighborhood has zero reachability (duplicates) score exactly 1 —
/// identical points are mutually typical. Requires |points| >= k+1.
std::vector<double> lof(const std::vector<std::vector<double>>& points, int k);

/// 1-D convenience overload.
std::vector<double> lof(const std::vector<double>& values, int k);

}  // namespace storelens
