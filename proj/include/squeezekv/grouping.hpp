// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "squeezekv/kv_model.hpp"
#include "squeezekv/profiler.hpp"

namespace squeezekv {

/// Three disjoint layer groups ordered by centroid. Group index 2 (g3) has the
/// highest mean cosine, i.e. the layers that change the embedding least.
struct LayerGroups {
    std::array<std::vector<std::uint32_t>, 3> members;
    std::array<double, 3> centroids{};
    std::uint32_t n_layer = 0;
    /// Set when the profile had fewer than three distinct values and the
    /// contiguous-thirds split was used instead of KMeans.
    bool degenerate = false;

    const std::vector<std::uint32_t>& g1() const { return members[0]; }
    const std::vector<std::uint32_t>& g2() const { return members[1]; }
    const std::vector<std::uint32_t>& g3() const { return members[2]; }

    /// Group index (0..2) of `layer`.
    int group_of(std::uint32_t layer) const;

    /// Within-cluster sum of squared distances for `values`.
    double within_ss(std::span<const double> values) const;

    bool operator==(const LayerGroups&) const = default;
};

inline constexpr int kMaxKMeansIterations = 100;

/// 1-D KMeans (k = 3) over per-layer mean cosines.
///
/// Lloyd iterations start from the values at the 1/6, 3/6 and 5/6 quantiles of
/// the sorted profile and run to an assignment fixed point. Distance ties go to
/// the lower centroid. A second start, the means of the optimal three-run split
/// of the sorted values, is also refined and kept only if it reaches a strictly
/// lower within-cluster sum of squares.
///
/// Throws InvalidArgument for fewer than three layers. With fewer than three
/// distinct values, layers are split into contiguous thirds of the
/// (value, layer index) order.
LayerGroups cluster_layers(const CosineProfile& profile);
LayerGroups cluster_values(std::span<const double> mean_cos);

/// Allowed range for the reallocation hyperparameter at the CLI.
inline constexpr double kMinSqueezeRatio = 0.05;
inline constexpr double kDefaultSqueezeRatio = 0.4;

struct BudgetPlan {
    TokenCount b_init = 0;
    double squeeze_ratio = 1.0;
    std::vector<TokenCount> budgets;
    LayerGroups groups;

    TokenCount total() const;
};

/// g3 layers receive floor(b_init * squeeze_ratio); every other layer receives
/// floor((n_layer * b_init - |g3| * b_init * squeeze_ratio) / (|g1| + |g2|)).
///
/// Throws InvalidArgument for squeeze_ratio outside (0, 1] or b_init == 0,
/// AllocationError when g3 holds every layer, and BudgetFloorError when a
/// budget lands below `min_budget`.
BudgetPlan allocate_budgets(const LayerGroups& groups, TokenCount b_init, double squeeze_ratio,
                            TokenCount min_budget = 1);

/// Plan giving every layer exactly b_init (no reallocation).
BudgetPlan uniform_plan(const LayerGroups& groups, TokenCount b_init);

}  // namespace squeezekv
