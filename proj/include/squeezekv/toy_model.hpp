// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "squeezekv/kv_model.hpp"

namespace squeezekv {

/// Row-major dense matrix; rows index inputs, columns outputs (y = x * W).
struct Matrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<float> data;

    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    /// y = x * W with a double accumulator per output.
    std::vector<float> left_multiply(std::span<const float> x) const;
};

struct ToyModelSpec {
    ModelShape shape;
    std::uint64_t seed = 0;
    /// Standard deviation of every projection weight.
    double weight_scale = 0.15;
    std::uint32_t vocab = 256;

    void validate() const;
};

/// Pre-norm decoder stack with deterministic pseudo-random weights:
/// x -> x + Attn(rms(x)) -> x + Mlp(rms(x)), MLP = SiLU with 4x expansion.
/// Weights derive from (seed, shape) through a portable generator, so every
/// platform rebuilds identical parameters.
class ToyModel {
public:
    struct LayerWeights {
        Matrix w_q;   // d_model x d_model
        Matrix w_k;   // d_model x kv_dim
        Matrix w_v;   // d_model x kv_dim
        Matrix w_o;   // d_model x d_model
        Matrix w_up;  // d_model x 4 d_model
        Matrix w_down;
    };

    explicit ToyModel(ToyModelSpec spec);

    const ToyModelSpec& spec() const { return spec_; }
    const ModelShape& shape() const { return spec_.shape; }
    const LayerWeights& layer(std::size_t i) const { return layers_.at(i); }

    std::uint32_t kv_heads() const { return spec_.shape.kv_dim / spec_.shape.head_dim(); }

    /// Token embedding plus a fixed sinusoidal position code.
    std::vector<float> embed(std::uint32_t token, Position pos) const;

    /// MLP sublayer with its residual: x + Mlp(rms(x)).
    std::vector<float> mlp_block(std::size_t layer, std::span<const float> x) const;

    /// Greedy next token: argmax over rms(x) * E^T (lowest id wins ties).
    std::uint32_t next_token(std::span<const float> final_hidden) const;

private:
    ToyModelSpec spec_;
    Matrix embedding_;  // vocab x d_model
    std::vector<LayerWeights> layers_;
};

/// RMS normalisation with unit gain.
std::vector<float> rms_norm(std::span<const float> x);

/// Deterministic prompt of `len` token ids below `vocab`.
std::vector<std::uint32_t> make_prompt(std::uint32_t vocab, std::size_t len, std::uint64_t seed);

/// Portable generator for weights and fixtures: mt19937_64 bits mapped to
/// uniform doubles without the implementation-defined std distributions.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed);

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform with the given standard deviation, zero mean.
    double centered(double stddev);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Approximately standard normal (sum of 12 uniforms minus 6).
    double gaussian();

private:
    std::mt19937_64 engine_;
};

}  // namespace squeezekv
