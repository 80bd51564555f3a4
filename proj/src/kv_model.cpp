// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/kv_model.hpp"

#include <numeric>
#include <string>

#include "squeezekv/error.hpp"

namespace squeezekv {

namespace checked {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw OverflowError("byte count overflow: " + std::to_string(a) + " * " + std::to_string(b) +
                            " exceeds 64 bits");
    }
    return out;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw OverflowError("token count overflow: " + std::to_string(a) + " + " + std::to_string(b) +
                            " exceeds 64 bits");
    }
    return out;
}

}  // namespace checked

void ModelShape::validate() const {
    if (n_layer < 1) throw InvalidArgument("n_layer must be >= 1");
    if (d_model < 1) throw InvalidArgument("d_model must be >= 1");
    if (n_heads < 1) throw InvalidArgument("n_heads must be >= 1");
    if (d_model % n_heads != 0) {
        throw InvalidArgument("d_model (" + std::to_string(d_model) + ") is not divisible by n_heads (" +
                              std::to_string(n_heads) + ")");
    }
    if (kv_dim < 1) throw InvalidArgument("kv_dim must be >= 1");
    switch (bytes_per_scalar) {
        case 1:
        case 2:
        case 4:
        case 8:
            break;
        default:
            throw InvalidArgument("bytes_per_scalar must be one of 1, 2, 4, 8 (got " +
                                  std::to_string(bytes_per_scalar) + ")");
    }
}

ModelShape make_shape(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t n_heads,
                      std::uint32_t bytes_per_scalar, std::uint32_t max_context) {
    ModelShape s;
    s.n_layer = n_layer;
    s.d_model = d_model;
    s.n_heads = n_heads;
    s.kv_dim = d_model;
    s.bytes_per_scalar = bytes_per_scalar;
    s.max_context = max_context;
    s.validate();
    return s;
}

void SimConfig::validate() const {
    if (prompt_len < 1) throw InvalidArgument("prompt_len must be >= 1");
    if (batch < 1) throw InvalidArgument("batch must be >= 1");
}

void LayerCache::append(Position pos) {
    if (!positions.empty() && pos <= positions.back()) {
        throw InvalidArgument("append: position " + std::to_string(pos) + " is not after " +
                              std::to_string(positions.back()));
    }
    positions.push_back(pos);
    scores.push_back(0.0);
}

void LayerCache::keep(const std::vector<std::size_t>& indices) {
    std::vector<Position> kept_pos;
    std::vector<double> kept_scores;
    kept_pos.reserve(indices.size());
    kept_scores.reserve(indices.size());
    for (std::size_t idx : indices) {
        kept_pos.push_back(positions.at(idx));
        kept_scores.push_back(scores.at(idx));
    }
    positions = std::move(kept_pos);
    scores = std::move(kept_scores);
}

void LayerCache::check_invariants() const {
    if (positions.size() != scores.size()) {
        throw InvalidArgument("layer cache: positions and scores differ in length");
    }
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] <= positions[i - 1]) {
            throw InvalidArgument("layer cache: positions not strictly increasing at index " + std::to_string(i));
        }
    }
    for (double s : scores) {
        if (!(s >= 0.0)) throw InvalidArgument("layer cache: negative or NaN score");
    }
}

KvCacheState::KvCacheState(std::size_t n_layer, TokenCount budget) : layers_(n_layer), budgets_(n_layer, budget) {}

void KvCacheState::set_budgets(const std::vector<TokenCount>& budgets) {
    if (budgets.size() != layers_.size()) {
        throw InvalidArgument("set_budgets: expected " + std::to_string(layers_.size()) + " budgets, got " +
                              std::to_string(budgets.size()));
    }
    budgets_ = budgets;
}

TokenCount KvCacheState::total_entries() const {
    return std::accumulate(layers_.begin(), layers_.end(), TokenCount{0},
                           [](TokenCount acc, const LayerCache& l) { return acc + l.size(); });
}

Bytes kv_bytes_per_token(const ModelShape& shape) {
    shape.validate();
    Bytes b = checked::mul(2, shape.kv_dim);
    b = checked::mul(b, shape.n_layer);
    return checked::mul(b, shape.bytes_per_scalar);
}

Bytes kv_cache_bytes(const ModelShape& shape, const SimConfig& cfg) {
    cfg.validate();
    const TokenCount tokens = checked::add(cfg.prompt_len, cfg.gen_len);
    Bytes b = kv_bytes_per_token(shape);
    b = checked::mul(b, cfg.batch);
    return checked::mul(b, tokens);
}

Bytes kv_cache_bytes_actual(const KvCacheState& cache, const ModelShape& shape, TokenCount batch) {
    shape.validate();
    if (cache.n_layer() != shape.n_layer) {
        throw InvalidArgument("cache has " + std::to_string(cache.n_layer()) + " layers but shape has " +
                              std::to_string(shape.n_layer));
    }
    if (batch < 1) throw InvalidArgument("batch must be >= 1");
    Bytes per_entry = checked::mul(2, shape.kv_dim);
    per_entry = checked::mul(per_entry, shape.bytes_per_scalar);
    per_entry = checked::mul(per_entry, batch);
    TokenCount entries = 0;
    for (std::size_t i = 0; i < cache.n_layer(); ++i) {
        entries = checked::add(entries, cache.layer(i).size());
    }
    return checked::mul(per_entry, entries);
}

TokenCount kv_weight_crossover_tokens(const ModelShape& shape, TokenCount batch, Bytes weight_bytes) {
    if (batch < 1) throw InvalidArgument("batch must be >= 1");
    const Bytes per_token = checked::mul(kv_bytes_per_token(shape), batch);
    return weight_bytes / per_token + (weight_bytes % per_token != 0 ? 1 : 0);
}

}  // namespace squeezekv
