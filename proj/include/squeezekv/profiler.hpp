// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace squeezekv {

/// Hidden states captured around each layer's attention sublayer during
/// prefill. `pre` is the residual stream entering the sublayer (A); `post` is
/// the stream after the attention residual add (B = A + Attn(norm(A))).
///
/// Layout is layer-major then token-major: the vector for (layer, token)
/// starts at ((layer * prompt_len) + token) * d_model. A compact trace carries
/// only per-token cosines (n_layer * prompt_len floats) and no vectors.
struct PrefillTrace {
    std::uint32_t n_layer = 0;
    std::uint32_t d_model = 0;
    std::uint32_t prompt_len = 0;
    bool compact = false;
    std::vector<float> pre;
    std::vector<float> post;
    std::vector<float> cosines;

    std::span<const float> pre_vec(std::size_t layer, std::size_t token) const;
    std::span<const float> post_vec(std::size_t layer, std::size_t token) const;
    std::span<float> pre_vec(std::size_t layer, std::size_t token);
    std::span<float> post_vec(std::size_t layer, std::size_t token);

    /// Allocates zeroed storage for a full trace.
    static PrefillTrace allocate(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t prompt_len);

    /// Throws FormatError on size mismatches or non-finite values.
    void validate() const;

    /// Per-token cosines of a full trace packed into a compact trace.
    PrefillTrace to_compact() const;
};

struct LayerSimilarity {
    std::uint32_t layer = 0;
    double mean_cos = 0.0;
};

struct CosineProfile {
    std::vector<LayerSimilarity> layers;
    /// Optional; layer-major per-token cosines when requested.
    std::vector<float> token_cosines;
    std::uint32_t prompt_len = 0;
    std::string source;

    std::vector<double> mean_values() const;
};

/// sum(a_i * b_i) / (|a| |b|) with double accumulation, clamped to [-1, 1].
/// Throws InvalidArgument on dimension mismatch or a zero-norm operand.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

struct ProfileOptions {
    bool keep_token_cosines = false;
    /// Worker threads for the per-layer reductions; 0 or 1 runs inline.
    unsigned threads = 1;
    std::string source;
};

/// Per-layer arithmetic mean of per-token cosines. Each per-token cosine is
/// rounded to f32 before averaging so full and compact traces of the same
/// prefill profile identically.
CosineProfile profile_layers(const PrefillTrace& trace, const ProfileOptions& opts = {});

/// Layer-wise mean of several profiles (one per prompt). All inputs must
/// share a layer count.
CosineProfile average_profiles(std::span<const CosineProfile> profiles);

}  // namespace squeezekv
