// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "squeezekv/error.hpp"

namespace squeezekv {

namespace {

using Centroids = std::array<double, 3>;

struct LloydResult {
    std::vector<int> assign;
    Centroids centroids{};
    double wcss = 0.0;
};

int nearest(double x, const Centroids& c) {
    int best = 0;
    double best_d = std::abs(x - c[0]);
    for (int k = 1; k < 3; ++k) {
        const double d = std::abs(x - c[k]);
        if (d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

LloydResult lloyd(std::span<const double> x, Centroids c) {
    const std::size_t n = x.size();
    std::vector<int> assign(n, -1);
    std::sort(c.begin(), c.end());
    for (int iter = 0; iter < kMaxKMeansIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int k = nearest(x[i], c);
            if (k != assign[i]) {
                assign[i] = k;
                changed = true;
            }
        }
        if (!changed) break;

        std::array<double, 3> sum{};
        std::array<std::size_t, 3> count{};
        for (std::size_t i = 0; i < n; ++i) {
            sum[assign[i]] += x[i];
            ++count[assign[i]];
        }
        for (int k = 0; k < 3; ++k) {
            if (count[k] > 0) {
                c[k] = sum[k] / static_cast<double>(count[k]);
                continue;
            }
            // Empty cluster: reseed at the point farthest from its own centroid.
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::abs(x[i] - c[assign[i]]);
                if (d > far_d) {
                    far = i;
                    far_d = d;
                }
            }
            c[k] = x[far];
        }
        // Means of interval clusters stay ordered; only a reseed can break it.
        std::sort(c.begin(), c.end());
    }

    LloydResult r;
    r.centroids = c;
    r.assign.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.assign[i] = nearest(x[i], c);
        const double d = x[i] - c[r.assign[i]];
        r.wcss += d * d;
    }
    return r;
}

Centroids quantile_seeds(const std::vector<double>& sorted_distinct) {
    const std::size_t m = sorted_distinct.size();
    return {sorted_distinct[m / 6], sorted_distinct[m / 2], sorted_distinct[(5 * m) / 6]};
}

// Means of the optimal split of the sorted values into three contiguous runs,
// found by dynamic programming over prefix sums.
Centroids optimal_split_seeds(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    std::vector<long double> s1(n + 1, 0.0L);
    std::vector<long double> s2(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i + 1] = s1[i] + v[i];
        s2[i + 1] = s2[i] + static_cast<long double>(v[i]) * v[i];
    }
    auto cost = [&](std::size_t lo, std::size_t hi) {
        const long double s = s1[hi] - s1[lo];
        return (s2[hi] - s2[lo]) - s * s / static_cast<long double>(hi - lo);
    };
    // best2[j]: cheapest split of v[0, j) into two runs; cut2[j] is where the second starts.
    std::vector<long double> best2(n + 1, std::numeric_limits<long double>::infinity());
    std::vector<std::size_t> cut2(n + 1, 0);
    for (std::size_t j = 2; j <= n; ++j) {
        for (std::size_t c = 1; c < j; ++c) {
            const long double total = cost(0, c) + cost(c, j);
            if (total < best2[j]) {
                best2[j] = total;
                cut2[j] = c;
            }
        }
    }
    long double best = std::numeric_limits<long double>::infinity();
    std::size_t a = 1;
    std::size_t b = 2;
    for (std::size_t j = 2; j < n; ++j) {
        const long double total = best2[j] + cost(j, n);
        if (total < best) {
            best = total;
            a = cut2[j];
            b = j;
        }
    }
    auto mean = [&](std::size_t lo, std::size_t hi) {
        return static_cast<double>((s1[hi] - s1[lo]) / static_cast<long double>(hi - lo));
    };
    return {mean(0, a), mean(a, b), mean(b, n)};
}

LayerGroups groups_from_assignment(std::span<const double> x, const std::vector<int>& assign) {
    LayerGroups g;
    g.n_layer = static_cast<std::uint32_t>(x.size());
    std::array<double, 3> sum{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        g.members[assign[i]].push_back(static_cast<std::uint32_t>(i));
        sum[assign[i]] += x[i];
    }
    for (int k = 0; k < 3; ++k) {
        g.centroids[k] = g.members[k].empty() ? 0.0 : sum[k] / static_cast<double>(g.members[k].size());
    }
    return g;
}

LayerGroups contiguous_thirds(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<int> assign(n);
    for (std::size_t r = 0; r < n; ++r) {
        // Rank r falls into third floor(3r / n); the last third absorbs remainders.
        assign[order[r]] = static_cast<int>(std::min<std::size_t>(2, (3 * r) / n));
    }
    LayerGroups g = groups_from_assignment(x, assign);
    g.degenerate = true;
    return g;
}

}  // namespace

int LayerGroups::group_of(std::uint32_t layer) const {
    for (int k = 0; k < 3; ++k) {
        if (std::binary_search(members[k].begin(), members[k].end(), layer)) return k;
    }
    throw InvalidArgument("layer " + std::to_string(layer) + " is not in any group");
}

double LayerGroups::within_ss(std::span<const double> values) const {
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (members[k].empty()) continue;
        double mean = 0.0;
        for (auto i : members[k]) mean += values[i];
        mean /= static_cast<double>(members[k].size());
        for (auto i : members[k]) total += (values[i] - mean) * (values[i] - mean);
    }
    return total;
}

LayerGroups cluster_values(std::span<const double> mean_cos) {
    const std::size_t n = mean_cos.size();
    if (n < 3) {
        throw InvalidArgument("cluster_layers: unsupported model: need at least 3 layers, got " + std::to_string(n));
    }
    for (double v : mean_cos) {
        if (!std::isfinite(v)) throw InvalidArgument("cluster_layers: non-finite mean cosine");
    }
    std::vector<double> distinct(mean_cos.begin(), mean_cos.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) return contiguous_thirds(mean_cos);

    LloydResult best = lloyd(mean_cos, quantile_seeds(distinct));
    LloydResult alt = lloyd(mean_cos, optimal_split_seeds(mean_cos));
    if (alt.wcss < best.wcss) best = std::move(alt);

    return groups_from_assignment(mean_cos, best.assign);
}

LayerGroups cluster_layers(const CosineProfile& profile) {
    const auto values = profile.mean_values();
    return cluster_values(values);
}

TokenCount BudgetPlan::total() const {
    return std::accumulate(budgets.begin(), budgets.end(), TokenCount{0});
}

namespace {

// floor() tolerant of representation error in products such as 1000 * 0.3.
TokenCount floor_tokens(long double x) {
    const long double eps = 1e-9L * std::max<long double>(1.0L, std::fabs(x));
    return static_cast<TokenCount>(std::floor(x + eps));
}

}  // namespace

BudgetPlan allocate_budgets(const LayerGroups& groups, TokenCount b_init, double squeeze_ratio,
                            TokenCount min_budget) {
    if (!(squeeze_ratio > 0.0 && squeeze_ratio <= 1.0)) {
        throw InvalidArgument("squeeze_ratio must lie in (0, 1], got " + std::to_string(squeeze_ratio));
    }
    if (b_init < 1) throw InvalidArgument("b_init must be >= 1");
    const std::size_t n = groups.n_layer;
    const std::size_t n_g3 = groups.g3().size();
    const std::size_t n_rest = groups.g1().size() + groups.g2().size();
    if (n_rest + n_g3 != n) throw InvalidArgument("layer groups do not cover every layer");
    if (n_rest == 0) {
        throw AllocationError("g3 contains every layer, so no layer can absorb the freed budget; "
                              "lower the number of groups or use uniform budgets");
    }

    const long double squeezed = static_cast<long double>(b_init) * squeeze_ratio;
    const long double pool = static_cast<long double>(n) * b_init - static_cast<long double>(n_g3) * squeezed;
    const TokenCount g3_budget = floor_tokens(squeezed);
    const TokenCount rest_budget = floor_tokens(pool / static_cast<long double>(n_rest));

    BudgetPlan plan;
    plan.b_init = b_init;
    plan.squeeze_ratio = squeeze_ratio;
    plan.groups = groups;
    plan.budgets.assign(n, rest_budget);
    for (auto layer : groups.g3()) plan.budgets[layer] = g3_budget;
    for (std::size_t i = 0; i < n; ++i) {
        if (plan.budgets[i] < min_budget) throw BudgetFloorError(i, plan.budgets[i], min_budget);
    }
    return plan;
}

BudgetPlan uniform_plan(const LayerGroups& groups, TokenCount b_init) {
    if (b_init < 1) throw InvalidArgument("b_init must be >= 1");
    BudgetPlan plan;
    plan.b_init = b_init;
    plan.squeeze_ratio = 1.0;
    plan.groups = groups;
    plan.budgets.assign(groups.n_layer, b_init);
    return plan;
}

}  // namespace squeezekv
