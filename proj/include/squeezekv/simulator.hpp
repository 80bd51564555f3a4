// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "squeezekv/eviction.hpp"
#include "squeezekv/grouping.hpp"
#include "squeezekv/kv_model.hpp"
#include "squeezekv/profiler.hpp"
#include "squeezekv/toy_model.hpp"

namespace squeezekv {

enum class CacheMode {
    squeeze,  // per-layer budgets from the plan
    uniform,  // b_init for every layer
    full,     // never evict
};

std::string to_string(CacheMode mode);
CacheMode parse_cache_mode(const std::string& name);

/// K and V rows of one layer, parallel to that layer's LayerCache entries.
struct LayerKv {
    std::vector<float> keys;
    std::vector<float> values;
};

struct PrefillResult {
    PrefillTrace trace;
    KvCacheState cache;
    std::vector<LayerKv> kv;
    /// Final-layer hidden state of every prompt token, token-major.
    std::vector<float> hidden;
};

/// Runs the prompt through the stack with causal attention, recording the
/// residual stream before (A) and after (B) each attention sublayer and
/// caching every prompt position in every layer. H2O scores start at the
/// column sums of the head-averaged prefill attention.
PrefillResult toy_prefill(const ToyModel& model, std::span<const std::uint32_t> prompt);

struct StepRecord {
    std::uint64_t step = 0;
    std::uint32_t token = 0;
    /// Per layer, entries left after the eviction check (before the append).
    std::vector<TokenCount> after_evict;
    /// Per layer, entries held while attending (after the append).
    std::vector<TokenCount> retained;
    Bytes bytes_after_evict = 0;
    Bytes bytes = 0;
    /// Per layer, share of full-cache attention mass on retained entries.
    std::vector<double> mass_retained;
};

struct SimReport {
    CacheMode mode = CacheMode::full;
    EvictionPolicy policy;
    BudgetPlan plan;
    /// Budgets in effect; kUnboundedBudget in full mode.
    std::vector<TokenCount> effective_budgets;
    ModelShape shape;
    std::uint64_t model_seed = 0;
    std::uint64_t prompt_seed = 0;
    TokenCount prompt_len = 0;
    TokenCount gen_len = 0;
    TokenCount batch = 1;

    std::vector<TokenCount> prefill_retained;
    Bytes prefill_bytes = 0;
    std::vector<StepRecord> steps;
    Bytes peak_bytes = 0;

    std::vector<std::uint32_t> generated;
    /// Final-layer hidden state per decode step, step-major.
    std::vector<float> hidden;
    /// FNV-1a over generated tokens and final hidden states.
    std::uint64_t fingerprint = 0;

    double mean_mass_retained() const;
    double min_mass_retained() const;
};

/// What the decode loop exposes to observers for one (step, layer).
struct StepEvent {
    std::uint64_t step = 0;
    std::size_t layer = 0;
    std::span<const Position> evicted;
    /// Entries attended this step, including the new token.
    std::span<const Position> retained;
    /// Renormalised head-averaged attention over `retained`.
    std::span<const double> attention;
    std::span<const double> scores;
};

using StepObserver = std::function<void(const StepEvent&)>;

struct DecodeOptions {
    TokenCount gen_len = 0;
    CacheMode mode = CacheMode::squeeze;
    TokenCount batch = 1;
    std::uint64_t prompt_seed = 0;
    StepObserver observer;
};

/// Greedy decode under the plan: per step and layer, evict when the layer
/// holds more than its budget, append the new K/V, attend over the retained
/// entries (renormalised), then add the attention row to the H2O scores.
///
/// Throws BudgetFloorError when a budget is below the policy floor and
/// ConstraintError when prompt + gen_len exceeds max_context.
SimReport simulate_decode(const ToyModel& model, std::span<const std::uint32_t> prompt, const BudgetPlan& plan,
                          const EvictionPolicy& policy, const DecodeOptions& opts);

/// Sum of `full_row[p]` over retained positions p. `full_row` is a
/// distribution over every historical position (index = position).
double attention_mass_retained(std::span<const double> full_row, std::span<const Position> retained);

/// Synthetic full trace whose layers outside `important` have B = A plus
/// noise at most 1e-3 |A| (cosine >= 0.999) and whose layers inside draw B
/// independently of A (expected cosine 0).
PrefillTrace make_planted_trace(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t prompt_len,
                                const std::set<std::uint32_t>& important, std::uint64_t seed);

/// Budget for b_init expressed as a fraction of prompt length, at least 1.
TokenCount budget_from_fraction(double fraction, TokenCount prompt_len);

}  // namespace squeezekv
