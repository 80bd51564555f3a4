// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "squeezekv/kv_model.hpp"

namespace squeezekv {

enum class PolicyKind { sliding_window, streaming, h2o };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

/// Sequence-wise compressor applied to each layer with that layer's budget.
struct EvictionPolicy {
    PolicyKind kind = PolicyKind::sliding_window;
    /// Leading positions always kept (streaming only).
    std::uint32_t n_sink = 4;
    /// Share of the budget reserved for the most recent positions (h2o only).
    double recent_fraction = 0.5;

    void validate() const;

    /// Smallest budget evict() accepts.
    TokenCount min_budget() const;

    bool operator==(const EvictionPolicy&) const = default;
};

/// Indices (into `layer`, ascending) of the entries the policy keeps under
/// `budget`. Returns every index when the layer already fits.
///
///   sliding_window  the `budget` largest positions
///   streaming       positions below n_sink, then the largest of the rest
///   h2o             floor(budget * recent_fraction) largest positions, then
///                   the highest accumulated scores among the rest; equal
///                   scores prefer the larger position
///
/// Throws BudgetFloorError (layer reported as `layer_index`) when `budget`
/// is below min_budget().
std::vector<std::size_t> select_retained(const EvictionPolicy& policy, const LayerCache& layer, TokenCount budget,
                                         std::size_t layer_index = 0);

/// Applies select_retained in place. Returns the number of evicted entries.
std::size_t evict(const EvictionPolicy& policy, LayerCache& layer, TokenCount budget, std::size_t layer_index = 0);

/// Adds one attention row (one probability per retained entry, in order) to
/// the accumulated scores. The row must be nonnegative and sum to 1 within 1e-5.
void accumulate_scores(LayerCache& layer, std::span<const double> attention_row);

inline constexpr double kRowSumTolerance = 1e-5;

}  // namespace squeezekv
