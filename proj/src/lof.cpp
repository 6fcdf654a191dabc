// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "storelens/errors.hpp"

namespace storelens {

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

std::vector<double> lof(const std::vector<std::vector<double>>& points, int k) {
    const std::size_t n = points.size();
    if (k < 1) throw InsufficientDataError("LOF needs k >= 1");
    if (n < static_cast<std::size_t>(k) + 1) {
        throw InsufficientDataError("LOF needs at least k+1 points, got " + std::to_string(n));
    }
    for (const auto& p : points) {
        if (p.size() != points.front().size()) {
            throw InsufficientDataError("LOF points must share a dimension");
        }
    }

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i][j] = dist[j][i] = euclidean(points[i], points[j]);
        }
    }

    // k-distance and the (tie-inclusive) k-neighborhood of each point.
    std::vector<double> kdist(n);
    std::vector<std::vector<std::size_t>> nbrs(n);
    std::vector<double> sorted;
    for (std::size_t i = 0; i < n; ++i) {
        sorted.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sorted.push_back(dist[i][j]);
        }
        std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
        kdist[i] = sorted[static_cast<std::size_t>(k - 1)];
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && dist[i][j] <= kdist[i]) nbrs[i].push_back(j);
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reach_sum = 0.0;
        for (std::size_t o : nbrs[i]) reach_sum += std::max(kdist[o], dist[i][o]);
        lrd[i] = reach_sum > 0.0 ? static_cast<double>(nbrs[i].size()) / reach_sum : inf;
    }

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isinf(lrd[i])) {
            scores[i] = 1.0;
            continue;
        }
        double ratio_sum = 0.0;
        bool any_inf = false;
        for (std::size_t o : nbrs[i]) {
            if (std::isinf(lrd[o])) {
                any_inf = true;
                break;
            }
            ratio_sum += lrd[o];
        }
        scores[i] = any_inf ? inf : ratio_sum / lrd[i] / static_cast<double>(nbrs[i].size());
    }
    return scores;
}

std::vector<double> lof(const std::vector<double>& values, int k) {
    std::vector<std::vector<double>> pts;
    pts.reserve(values.size());
    for (double v : values) pts.push_back({v});
    return lof(pts, k);
}

}  // namespace storelens
