// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/toy_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "squeezekv/error.hpp"

namespace squeezekv {

DeterministicRng::DeterministicRng(std::uint64_t seed) : engine_(seed) {}

double DeterministicRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double DeterministicRng::centered(double stddev) {
    // Uniform on [-a, a) has standard deviation a / sqrt(3).
    const double a = stddev * std::sqrt(3.0);
    return (2.0 * uniform() - 1.0) * a;
}

std::uint64_t DeterministicRng::below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("DeterministicRng::below(0)");
    // Rejection sampling keeps the result unbiased and portable.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
}

double DeterministicRng::gaussian() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += uniform();
    return s - 6.0;
}

std::vector<float> Matrix::left_multiply(std::span<const float> x) const {
    if (x.size() != rows) {
        throw InvalidArgument("matrix multiply: vector has " + std::to_string(x.size()) + " entries, matrix has " +
                              std::to_string(rows) + " rows");
    }
    std::vector<double> acc(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double xr = x[r];
        const float* row = data.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc[c] += xr * row[c];
    }
    return {acc.begin(), acc.end()};
}

void ToyModelSpec::validate() const {
    shape.validate();
    const std::uint32_t hd = shape.head_dim();
    if (shape.kv_dim % hd != 0) {
        throw InvalidArgument("toy model: kv_dim (" + std::to_string(shape.kv_dim) +
                              ") must be a multiple of the head width (" + std::to_string(hd) + ")");
    }
    const std::uint32_t kv_heads = shape.kv_dim / hd;
    if (kv_heads == 0 || shape.n_heads % kv_heads != 0) {
        throw InvalidArgument("toy model: n_heads must be a multiple of the number of KV heads");
    }
    if (vocab < 2) throw InvalidArgument("toy model: vocab must be >= 2");
    if (!(weight_scale > 0.0) || !std::isfinite(weight_scale)) {
        throw InvalidArgument("toy model: weight_scale must be positive");
    }
}

namespace {

Matrix random_matrix(DeterministicRng& rng, std::uint32_t rows, std::uint32_t cols, double stddev) {
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.resize(static_cast<std::size_t>(rows) * cols);
    for (auto& v : m.data) v = static_cast<float>(rng.centered(stddev));
    return m;
}

float silu(float x) { return x / (1.0f + std::exp(-x)); }

}  // namespace

ToyModel::ToyModel(ToyModelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const auto& s = spec_.shape;
    DeterministicRng rng(spec_.seed);
    embedding_ = random_matrix(rng, spec_.vocab, s.d_model, 1.0);
    const double w = spec_.weight_scale;
    layers_.reserve(s.n_layer);
    for (std::uint32_t i = 0; i < s.n_layer; ++i) {
        LayerWeights lw;
        lw.w_q = random_matrix(rng, s.d_model, s.d_model, w);
        lw.w_k = random_matrix(rng, s.d_model, s.kv_dim, w);
        lw.w_v = random_matrix(rng, s.d_model, s.kv_dim, w);
        lw.w_o = random_matrix(rng, s.d_model, s.d_model, w);
        lw.w_up = random_matrix(rng, s.d_model, 4 * s.d_model, w);
        lw.w_down = random_matrix(rng, 4 * s.d_model, s.d_model, w);
        layers_.push_back(std::move(lw));
    }
}

std::vector<float> ToyModel::embed(std::uint32_t token, Position pos) const {
    if (token >= spec_.vocab) {
        throw InvalidArgument("token id " + std::to_string(token) + " is outside the vocabulary of " +
                              std::to_string(spec_.vocab));
    }
    const std::uint32_t d = spec_.shape.d_model;
    std::vector<float> x(embedding_.data.begin() + static_cast<std::ptrdiff_t>(token) * d,
                         embedding_.data.begin() + static_cast<std::ptrdiff_t>(token + 1) * d);
    for (std::uint32_t i = 0; i < d; ++i) {
        const double freq = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / d);
        const double angle = static_cast<double>(pos) * freq;
        x[i] += static_cast<float>(0.5 * ((i % 2 == 0) ? std::sin(angle) : std::cos(angle)));
    }
    return x;
}

std::vector<float> rms_norm(std::span<const float> x) {
    double ss = 0.0;
    for (float v : x) ss += static_cast<double>(v) * v;
    const double inv = 1.0 / std::sqrt(ss / static_cast<double>(x.size()) + 1e-6);
    std::vector<float> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<float>(x[i] * inv);
    return out;
}

std::vector<float> ToyModel::mlp_block(std::size_t layer, std::span<const float> x) const {
    const auto& lw = layers_.at(layer);
    auto hidden = lw.w_up.left_multiply(rms_norm(x));
    for (auto& v : hidden) v = silu(v);
    const auto down = lw.w_down.left_multiply(hidden);
    std::vector<float> out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += down[i];
    return out;
}

std::uint32_t ToyModel::next_token(std::span<const float> final_hidden) const {
    const auto h = rms_norm(final_hidden);
    const std::uint32_t d = spec_.shape.d_model;
    std::uint32_t best = 0;
    double best_logit = -std::numeric_limits<double>::infinity();
    for (std::uint32_t t = 0; t < spec_.vocab; ++t) {
        double logit = 0.0;
        const float* row = embedding_.data.data() + static_cast<std::size_t>(t) * d;
        for (std::uint32_t i = 0; i < d; ++i) logit += static_cast<double>(h[i]) * row[i];
        if (logit > best_logit) {
            best_logit = logit;
            best = t;
        }
    }
    return best;
}

std::vector<std::uint32_t> make_prompt(std::uint32_t vocab, std::size_t len, std::uint64_t seed) {
    DeterministicRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::uint32_t> out(len);
    for (auto& t : out) t = static_cast<std::uint32_t>(rng.below(vocab));
    return out;
}

}  // namespace squeezekv
