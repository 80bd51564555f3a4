// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "squeezekv/error.hpp"

namespace squeezekv {

namespace {

std::size_t vec_offset(const PrefillTrace& t, std::size_t layer, std::size_t token) {
    if (t.compact) throw InvalidArgument("compact trace carries no hidden-state vectors");
    if (layer >= t.n_layer || token >= t.prompt_len) {
        throw InvalidArgument("trace coordinate (" + std::to_string(layer) + ", " + std::to_string(token) +
                              ") out of range");
    }
    return (layer * static_cast<std::size_t>(t.prompt_len) + token) * t.d_model;
}

std::string coord(std::size_t layer, std::size_t token) {
    return "layer " + std::to_string(layer) + ", token " + std::to_string(token);
}

}  // namespace

std::span<const float> PrefillTrace::pre_vec(std::size_t layer, std::size_t token) const {
    return {pre.data() + vec_offset(*this, layer, token), d_model};
}

std::span<const float> PrefillTrace::post_vec(std::size_t layer, std::size_t token) const {
    return {post.data() + vec_offset(*this, layer, token), d_model};
}

std::span<float> PrefillTrace::pre_vec(std::size_t layer, std::size_t token) {
    return {pre.data() + vec_offset(*this, layer, token), d_model};
}

std::span<float> PrefillTrace::post_vec(std::size_t layer, std::size_t token) {
    return {post.data() + vec_offset(*this, layer, token), d_model};
}

PrefillTrace PrefillTrace::allocate(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t prompt_len) {
    PrefillTrace t;
    t.n_layer = n_layer;
    t.d_model = d_model;
    t.prompt_len = prompt_len;
    const std::size_t n = static_cast<std::size_t>(n_layer) * prompt_len * d_model;
    t.pre.assign(n, 0.0f);
    t.post.assign(n, 0.0f);
    return t;
}

void PrefillTrace::validate() const {
    if (n_layer < 1 || d_model < 1 || prompt_len < 1) {
        throw FormatError("trace header has a zero dimension (n_layer=" + std::to_string(n_layer) +
                          ", d_model=" + std::to_string(d_model) + ", prompt_len=" + std::to_string(prompt_len) +
                          ")");
    }
    const std::size_t pairs = static_cast<std::size_t>(n_layer) * prompt_len;
    if (compact) {
        if (cosines.size() != pairs) {
            throw FormatError("compact trace holds " + std::to_string(cosines.size()) + " cosines, expected " +
                              std::to_string(pairs));
        }
        for (std::size_t i = 0; i < cosines.size(); ++i) {
            if (!std::isfinite(cosines[i]) || cosines[i] < -1.0f || cosines[i] > 1.0f) {
                throw FormatError("compact trace cosine out of range at " + coord(i / prompt_len, i % prompt_len));
            }
        }
        return;
    }
    const std::size_t n = pairs * d_model;
    if (pre.size() != n || post.size() != n) {
        throw FormatError("trace vectors hold " + std::to_string(pre.size()) + "/" + std::to_string(post.size()) +
                          " floats, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(pre[i]) || !std::isfinite(post[i])) {
            const std::size_t pair = i / d_model;
            throw FormatError("non-finite component in trace at " + coord(pair / prompt_len, pair % prompt_len));
        }
    }
}

PrefillTrace PrefillTrace::to_compact() const {
    validate();
    if (compact) return *this;
    PrefillTrace out;
    out.n_layer = n_layer;
    out.d_model = d_model;
    out.prompt_len = prompt_len;
    out.compact = true;
    out.cosines.resize(static_cast<std::size_t>(n_layer) * prompt_len);
    for (std::size_t l = 0; l < n_layer; ++l) {
        for (std::size_t t = 0; t < prompt_len; ++t) {
            out.cosines[l * prompt_len + t] = static_cast<float>(cosine_similarity(pre_vec(l, t), post_vec(l, t)));
        }
    }
    return out;
}

std::vector<double> CosineProfile::mean_values() const {
    std::vector<double> out;
    out.reserve(layers.size());
    for (const auto& l : layers) out.push_back(l.mean_cos);
    return out;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i];
        const double y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine_similarity: zero-norm vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

CosineProfile profile_layers(const PrefillTrace& trace, const ProfileOptions& opts) {
    trace.validate();
    const std::size_t n_layer = trace.n_layer;
    const std::size_t n_tok = trace.prompt_len;

    std::vector<float> token_cos(n_layer * n_tok);
    std::vector<double> means(n_layer, 0.0);
    std::vector<std::string> errors(n_layer);

    auto run_layer = [&](std::size_t l) {
        double sum = 0.0;
        for (std::size_t t = 0; t < n_tok; ++t) {
            float c = 0.0f;
            if (trace.compact) {
                c = trace.cosines[l * n_tok + t];
            } else {
                try {
                    c = static_cast<float>(cosine_similarity(trace.pre_vec(l, t), trace.post_vec(l, t)));
                } catch (const InvalidArgument& e) {
                    errors[l] = coord(l, t) + ": " + e.what();
                    return;
                }
            }
            token_cos[l * n_tok + t] = c;
            sum += c;
        }
        means[l] = std::clamp(sum / static_cast<double>(n_tok), -1.0, 1.0);
    };

    const unsigned threads = std::min<unsigned>(std::max(1u, opts.threads), static_cast<unsigned>(n_layer));
    if (threads <= 1) {
        for (std::size_t l = 0; l < n_layer; ++l) run_layer(l);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t l = w; l < n_layer; l += threads) run_layer(l);
            });
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) throw InvalidArgument("profile_layers: " + e);
    }

    CosineProfile out;
    out.prompt_len = trace.prompt_len;
    out.source = opts.source;
    out.layers.reserve(n_layer);
    for (std::size_t l = 0; l < n_layer; ++l) out.layers.push_back({static_cast<std::uint32_t>(l), means[l]});
    if (opts.keep_token_cosines) out.token_cosines = std::move(token_cos);
    return out;
}

CosineProfile average_profiles(std::span<const CosineProfile> profiles) {
    if (profiles.empty()) throw InvalidArgument("average_profiles: no profiles");
    if (profiles.size() == 1) return profiles.front();
    const std::size_t n_layer = profiles.front().layers.size();
    CosineProfile out;
    out.layers.resize(n_layer);
    std::uint64_t total_tokens = 0;
    for (const auto& p : profiles) {
        if (p.layers.size() != n_layer) {
            throw InvalidArgument("average_profiles: layer counts differ (" + std::to_string(n_layer) + " vs " +
                                  std::to_string(p.layers.size()) + ")");
        }
        total_tokens += p.prompt_len;
        for (std::size_t l = 0; l < n_layer; ++l) out.layers[l].mean_cos += p.layers[l].mean_cos;
    }
    for (std::size_t l = 0; l < n_layer; ++l) {
        out.layers[l].layer = static_cast<std::uint32_t>(l);
        out.layers[l].mean_cos /= static_cast<double>(profiles.size());
    }
    out.prompt_len = static_cast<std::uint32_t>(total_tokens / profiles.size());
    out.source = "mean of " + std::to_string(profiles.size()) + " profiles";
    return out;
}

}  // namespace squeezekv
