// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace squeezekv {

using Bytes = std::uint64_t;
using TokenCount = std::uint64_t;
using Position = std::uint32_t;

/// Budget value meaning "never evict".
inline constexpr TokenCount kUnboundedBudget = std::numeric_limits<TokenCount>::max();

/// Static dimensions of a decoder stack. `kv_dim` is the width of one K (or V)
/// row per token; it equals `d_model` unless the model shares KV heads.
struct ModelShape {
    std::uint32_t n_layer = 1;
    std::uint32_t d_model = 1;
    std::uint32_t n_heads = 1;
    std::uint32_t kv_dim = 1;
    std::uint32_t bytes_per_scalar = 2;
    std::uint32_t max_context = 4096;

    std::uint32_t head_dim() const { return d_model / n_heads; }

    /// Throws InvalidArgument naming the first violated invariant.
    void validate() const;

    bool operator==(const ModelShape&) const = default;
};

/// Convenience constructor: kv_dim defaults to d_model.
ModelShape make_shape(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t n_heads,
                      std::uint32_t bytes_per_scalar, std::uint32_t max_context = 4096);

/// Per-run sizes: prompt length, generated length and batch width.
struct SimConfig {
    TokenCount prompt_len = 1;
    TokenCount gen_len = 0;
    TokenCount batch = 1;
    std::uint64_t seed = 0;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

/// Retained token positions of one layer, sorted ascending, each with its
/// accumulated attention score. K/V payloads live with the simulator.
struct LayerCache {
    std::vector<Position> positions;
    std::vector<double> scores;

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }

    /// Appends a position strictly larger than every retained one, score 0.
    void append(Position pos);

    /// Keeps the entries at `indices` (ascending, unique) and drops the rest.
    void keep(const std::vector<std::size_t>& indices);

    /// Throws InvalidArgument if positions are not strictly increasing, the
    /// parallel arrays disagree, or a score is negative.
    void check_invariants() const;
};

/// Occupancy of the whole cache: one LayerCache and one budget per layer.
class KvCacheState {
public:
    KvCacheState() = default;
    explicit KvCacheState(std::size_t n_layer, TokenCount budget = kUnboundedBudget);

    std::size_t n_layer() const { return layers_.size(); }

    LayerCache& layer(std::size_t i) { return layers_.at(i); }
    const LayerCache& layer(std::size_t i) const { return layers_.at(i); }

    TokenCount budget(std::size_t i) const { return budgets_.at(i); }
    void set_budget(std::size_t i, TokenCount b) { budgets_.at(i) = b; }
    void set_budgets(const std::vector<TokenCount>& budgets);

    /// Sum of retained entries across layers.
    TokenCount total_entries() const;

private:
    std::vector<LayerCache> layers_;
    std::vector<TokenCount> budgets_;
};

/// Upper bound on KV-cache bytes when every layer caches every token:
/// 2 * kv_dim * n_layer * batch * (prompt_len + gen_len) * bytes_per_scalar.
/// Throws OverflowError instead of wrapping.
Bytes kv_cache_bytes(const ModelShape& shape, const SimConfig& cfg);

/// Bytes actually held by `cache`: 2 * kv_dim * bytes_per_scalar * batch * sum of
/// retained entries. Throws InvalidArgument when the layer count disagrees with `shape`.
Bytes kv_cache_bytes_actual(const KvCacheState& cache, const ModelShape& shape, TokenCount batch);

/// Bytes per cached token across all layers for one sequence.
Bytes kv_bytes_per_token(const ModelShape& shape);

/// Smallest total token count (prompt + generated) whose full KV cache at
/// `batch` reaches `weight_bytes`.
TokenCount kv_weight_crossover_tokens(const ModelShape& shape, TokenCount batch, Bytes weight_bytes);

namespace checked {

/// a * b, throwing OverflowError on wraparound.
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
std::uint64_t add(std::uint64_t a, std::uint64_t b);

}  // namespace checked

}  // namespace squeezekv
