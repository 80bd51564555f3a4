// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/eviction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "squeezekv/error.hpp"

namespace squeezekv {

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::sliding_window:
            return "sliding_window";
        case PolicyKind::streaming:
            return "streaming";
        case PolicyKind::h2o:
            return "h2o";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "sliding_window") return PolicyKind::sliding_window;
    if (name == "streaming") return PolicyKind::streaming;
    if (name == "h2o") return PolicyKind::h2o;
    throw InvalidArgument("unknown eviction policy '" + name + "' (expected sliding_window, streaming or h2o)");
}

void EvictionPolicy::validate() const {
    if (!(recent_fraction > 0.0 && recent_fraction < 1.0)) {
        throw InvalidArgument("recent_fraction must lie in (0, 1), got " + std::to_string(recent_fraction));
    }
}

TokenCount EvictionPolicy::min_budget() const {
    switch (kind) {
        case PolicyKind::sliding_window:
            return 1;
        case PolicyKind::streaming:
            return TokenCount{n_sink} + 1;
        case PolicyKind::h2o:
            return 2;
    }
    return 1;
}

std::vector<std::size_t> select_retained(const EvictionPolicy& policy, const LayerCache& layer, TokenCount budget,
                                         std::size_t layer_index) {
    policy.validate();
    if (budget < policy.min_budget()) throw BudgetFloorError(layer_index, budget, policy.min_budget());

    const std::size_t n = layer.size();
    std::vector<std::size_t> keep;
    if (n <= budget) {
        keep.resize(n);
        std::iota(keep.begin(), keep.end(), std::size_t{0});
        return keep;
    }
    const auto b = static_cast<std::size_t>(budget);

    switch (policy.kind) {
        case PolicyKind::sliding_window: {
            keep.resize(b);
            std::iota(keep.begin(), keep.end(), n - b);
            break;
        }
        case PolicyKind::streaming: {
            // Positions are sorted, so sinks form a prefix.
            std::size_t sinks = 0;
            while (sinks < n && layer.positions[sinks] < policy.n_sink) ++sinks;
            for (std::size_t i = 0; i < sinks; ++i) keep.push_back(i);
            for (std::size_t i = n - (b - sinks); i < n; ++i) keep.push_back(i);
            break;
        }
        case PolicyKind::h2o: {
            const auto recent = static_cast<std::size_t>(std::floor(static_cast<double>(b) * policy.recent_fraction));
            const std::size_t heavy = b - recent;
            const std::size_t pool = n - recent;
            std::vector<std::size_t> candidates(pool);
            std::iota(candidates.begin(), candidates.end(), std::size_t{0});
            std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(heavy),
                              candidates.end(), [&](std::size_t a, std::size_t c) {
                                  if (layer.scores[a] != layer.scores[c]) return layer.scores[a] > layer.scores[c];
                                  return a > c;
                              });
            keep.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(heavy));
            std::sort(keep.begin(), keep.end());
            for (std::size_t i = pool; i < n; ++i) keep.push_back(i);
            break;
        }
    }
    return keep;
}

std::size_t evict(const EvictionPolicy& policy, LayerCache& layer, TokenCount budget, std::size_t layer_index) {
    const auto keep = select_retained(policy, layer, budget, layer_index);
    const std::size_t dropped = layer.size() - keep.size();
    if (dropped > 0) layer.keep(keep);
    return dropped;
}

void accumulate_scores(LayerCache& layer, std::span<const double> attention_row) {
    if (attention_row.size() != layer.size()) {
        throw InvalidArgument("accumulate_scores: row has " + std::to_string(attention_row.size()) +
                              " entries for " + std::to_string(layer.size()) + " retained positions");
    }
    double sum = 0.0;
    for (double p : attention_row) {
        if (!(p >= 0.0)) throw InvalidArgument("accumulate_scores: negative or NaN probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("accumulate_scores: row sums to " + std::to_string(sum) + ", not 1");
    }
    for (std::size_t i = 0; i < attention_row.size(); ++i) layer.scores[i] += attention_row[i];
}

}  // namespace squeezekv
