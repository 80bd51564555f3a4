// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include "squeezekv/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "squeezekv/error.hpp"

namespace squeezekv {

std::string to_string(CacheMode mode) {
    switch (mode) {
        case CacheMode::squeeze:
            return "squeeze";
        case CacheMode::uniform:
            return "uniform";
        case CacheMode::full:
            return "full";
    }
    return "unknown";
}

CacheMode parse_cache_mode(const std::string& name) {
    if (name == "squeeze") return CacheMode::squeeze;
    if (name == "uniform") return CacheMode::uniform;
    if (name == "full") return CacheMode::full;
    throw InvalidArgument("unknown mode '" + name + "' (expected squeeze, uniform or full)");
}

namespace {

struct Attention {
    std::vector<float> context;
    std::vector<double> probs;  // head-averaged, one per key row
};

// Multi-head softmax attention of one query over `n` cached rows. Rows are
// kv_dim wide; query heads share KV heads in groups. `values` may be null when
// only the probabilities are needed.
Attention attend(const ToyModel& model, std::span<const float> q, const float* keys, const float* values,
                 std::size_t n) {
    const auto& s = model.shape();
    const std::uint32_t hd = s.head_dim();
    const std::uint32_t group = s.n_heads / model.kv_heads();
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    Attention out;
    out.probs.assign(n, 0.0);
    if (values != nullptr) out.context.assign(s.d_model, 0.0f);
    std::vector<double> logits(n);
    std::vector<double> ctx(hd);
    for (std::uint32_t h = 0; h < s.n_heads; ++h) {
        const std::size_t kv_off = static_cast<std::size_t>(h / group) * hd;
        const float* qh = q.data() + static_cast<std::size_t>(h) * hd;
        double max_logit = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const float* kj = keys + j * s.kv_dim + kv_off;
            double dot = 0.0;
            for (std::uint32_t d = 0; d < hd; ++d) dot += static_cast<double>(qh[d]) * kj[d];
            logits[j] = dot * scale;
            max_logit = std::max(max_logit, logits[j]);
        }
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            logits[j] = std::exp(logits[j] - max_logit);
            z += logits[j];
        }
        std::fill(ctx.begin(), ctx.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double p = logits[j] / z;
            out.probs[j] += p / s.n_heads;
            if (values != nullptr) {
                const float* vj = values + j * s.kv_dim + kv_off;
                for (std::uint32_t d = 0; d < hd; ++d) ctx[d] += p * vj[d];
            }
        }
        if (values != nullptr) {
            for (std::uint32_t d = 0; d < hd; ++d) out.context[static_cast<std::size_t>(h) * hd + d] = static_cast<float>(ctx[d]);
        }
    }
    return out;
}

void add_into(std::vector<float>& x, const std::vector<float>& delta) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta[i];
}

void append_row(std::vector<float>& dst, const std::vector<float>& row) { dst.insert(dst.end(), row.begin(), row.end()); }

void keep_rows(std::vector<float>& rows, std::size_t width, const std::vector<std::size_t>& keep) {
    std::vector<float> out;
    out.reserve(keep.size() * width);
    for (std::size_t idx : keep) {
        out.insert(out.end(), rows.begin() + static_cast<std::ptrdiff_t>(idx * width),
                   rows.begin() + static_cast<std::ptrdiff_t>((idx + 1) * width));
    }
    rows = std::move(out);
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_u32(std::uint64_t& h, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
}

void check_context(const ModelShape& shape, std::size_t tokens) {
    if (tokens > shape.max_context) {
        throw ConstraintError("context overflow: " + std::to_string(tokens) + " tokens exceed max_context " +
                              std::to_string(shape.max_context));
    }
}

}  // namespace

PrefillResult toy_prefill(const ToyModel& model, std::span<const std::uint32_t> prompt) {
    const auto& s = model.shape();
    if (prompt.empty()) throw InvalidArgument("prompt must hold at least one token");
    check_context(s, prompt.size());
    const std::size_t n_tok = prompt.size();

    PrefillResult r;
    r.trace = PrefillTrace::allocate(s.n_layer, s.d_model, static_cast<std::uint32_t>(n_tok));
    r.cache = KvCacheState(s.n_layer);
    r.kv.resize(s.n_layer);

    std::vector<std::vector<float>> x(n_tok);
    for (std::size_t t = 0; t < n_tok; ++t) x[t] = model.embed(prompt[t], static_cast<Position>(t));

    for (std::size_t l = 0; l < s.n_layer; ++l) {
        const auto& lw = model.layer(l);
        auto& kv = r.kv[l];
        auto& cache = r.cache.layer(l);
        std::vector<std::vector<float>> queries(n_tok);
        for (std::size_t t = 0; t < n_tok; ++t) {
            const auto normed = rms_norm(x[t]);
            queries[t] = lw.w_q.left_multiply(normed);
            append_row(kv.keys, lw.w_k.left_multiply(normed));
            append_row(kv.values, lw.w_v.left_multiply(normed));
            cache.append(static_cast<Position>(t));
        }
        for (std::size_t t = 0; t < n_tok; ++t) {
            const auto att = attend(model, queries[t], kv.keys.data(), kv.values.data(), t + 1);
            for (std::size_t j = 0; j <= t; ++j) cache.scores[j] += att.probs[j];

            auto pre = r.trace.pre_vec(l, t);
            std::copy(x[t].begin(), x[t].end(), pre.begin());
            add_into(x[t], lw.w_o.left_multiply(att.context));
            auto post = r.trace.post_vec(l, t);
            std::copy(x[t].begin(), x[t].end(), post.begin());
            x[t] = model.mlp_block(l, x[t]);
        }
    }
    r.hidden.reserve(n_tok * s.d_model);
    for (const auto& h : x) append_row(r.hidden, h);
    return r;
}

double attention_mass_retained(std::span<const double> full_row, std::span<const Position> retained) {
    double total = 0.0;
    for (double p : full_row) {
        if (!(p >= 0.0)) throw InvalidArgument("attention_mass_retained: negative or NaN probability");
        total += p;
    }
    if (std::abs(total - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("attention_mass_retained: full row sums to " + std::to_string(total) + ", not 1");
    }
    if (retained.size() == full_row.size()) return 1.0;
    double mass = 0.0;
    for (Position p : retained) {
        if (p >= full_row.size()) {
            throw InvalidArgument("attention_mass_retained: position " + std::to_string(p) + " outside the row");
        }
        mass += full_row[p];
    }
    return std::clamp(mass, 0.0, 1.0);
}

double SimReport::mean_mass_retained() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : steps) {
        for (double m : s.mass_retained) {
            sum += m;
            ++n;
        }
    }
    return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

double SimReport::min_mass_retained() const {
    double lo = 1.0;
    for (const auto& s : steps) {
        for (double m : s.mass_retained) lo = std::min(lo, m);
    }
    return lo;
}

SimReport simulate_decode(const ToyModel& model, std::span<const std::uint32_t> prompt, const BudgetPlan& plan,
                          const EvictionPolicy& policy, const DecodeOptions& opts) {
    const auto& s = model.shape();
    policy.validate();
    if (opts.batch < 1) throw InvalidArgument("batch must be >= 1");
    check_context(s, prompt.size() + opts.gen_len);

    std::vector<TokenCount> budgets;
    switch (opts.mode) {
        case CacheMode::full:
            budgets.assign(s.n_layer, kUnboundedBudget);
            break;
        case CacheMode::uniform:
            if (plan.b_init < 1) throw InvalidArgument("uniform mode needs b_init >= 1");
            budgets.assign(s.n_layer, plan.b_init);
            break;
        case CacheMode::squeeze:
            if (plan.budgets.size() != s.n_layer) {
                throw InvalidArgument("plan covers " + std::to_string(plan.budgets.size()) + " layers, model has " +
                                      std::to_string(s.n_layer));
            }
            budgets = plan.budgets;
            break;
    }
    if (opts.mode != CacheMode::full) {
        for (std::size_t l = 0; l < budgets.size(); ++l) {
            if (budgets[l] < policy.min_budget()) throw BudgetFloorError(l, budgets[l], policy.min_budget());
        }
    }

    PrefillResult pre = toy_prefill(model, prompt);
    KvCacheState& cache = pre.cache;
    cache.set_budgets(budgets);

    SimReport rep;
    rep.mode = opts.mode;
    rep.policy = policy;
    rep.plan = plan;
    rep.effective_budgets = budgets;
    rep.shape = s;
    rep.model_seed = model.spec().seed;
    rep.prompt_seed = opts.prompt_seed;
    rep.prompt_len = prompt.size();
    rep.gen_len = opts.gen_len;
    rep.batch = opts.batch;
    for (std::size_t l = 0; l < s.n_layer; ++l) rep.prefill_retained.push_back(cache.layer(l).size());
    rep.prefill_bytes = kv_cache_bytes_actual(cache, s, opts.batch);
    rep.peak_bytes = rep.prefill_bytes;

    // Every key ever computed, indexed by position; feeds the full-cache
    // reference row of the quality proxy only.
    std::vector<std::vector<float>> all_keys(s.n_layer);
    for (std::size_t l = 0; l < s.n_layer; ++l) all_keys[l] = pre.kv[l].keys;

    std::uint64_t fp = kFnvOffset;
    const std::size_t n_prompt = prompt.size();
    std::vector<float> last(pre.hidden.end() - s.d_model, pre.hidden.end());
    std::uint32_t token = model.next_token(last);
    std::vector<Position> evicted;

    for (std::uint64_t step = 1; step <= opts.gen_len; ++step) {
        const auto pos = static_cast<Position>(n_prompt + step - 1);
        StepRecord rec;
        rec.step = step;
        rec.after_evict.resize(s.n_layer);
        rec.retained.resize(s.n_layer);
        rec.mass_retained.resize(s.n_layer);

        std::vector<float> x = model.embed(token, pos);
        for (std::size_t l = 0; l < s.n_layer; ++l) {
            const auto& lw = model.layer(l);
            auto& layer = cache.layer(l);
            auto& kv = pre.kv[l];

            evicted.clear();
            if (layer.size() > budgets[l]) {
                const auto keep = select_retained(policy, layer, budgets[l], l);
                std::size_t k = 0;
                for (std::size_t i = 0; i < layer.size(); ++i) {
                    if (k < keep.size() && keep[k] == i) {
                        ++k;
                    } else {
                        evicted.push_back(layer.positions[i]);
                    }
                }
                layer.keep(keep);
                keep_rows(kv.keys, s.kv_dim, keep);
                keep_rows(kv.values, s.kv_dim, keep);
            }
            rec.after_evict[l] = layer.size();

            const auto normed = rms_norm(x);
            const auto q = lw.w_q.left_multiply(normed);
            const auto k_new = lw.w_k.left_multiply(normed);
            append_row(kv.keys, k_new);
            append_row(kv.values, lw.w_v.left_multiply(normed));
            append_row(all_keys[l], k_new);
            layer.append(pos);
            rec.retained[l] = layer.size();

            const auto att = attend(model, q, kv.keys.data(), kv.values.data(), layer.size());
            accumulate_scores(layer, att.probs);

            const auto full = attend(model, q, all_keys[l].data(), nullptr, pos + 1);
            rec.mass_retained[l] = attention_mass_retained(full.probs, layer.positions);

            if (opts.observer) {
                opts.observer(StepEvent{step, l, evicted, layer.positions, att.probs, layer.scores});
            }

            add_into(x, lw.w_o.left_multiply(att.context));
            x = model.mlp_block(l, x);
        }

        // Counts only; the eviction and append phases are both reported.
        KvCacheState snapshot(s.n_layer);
        for (std::size_t l = 0; l < s.n_layer; ++l) snapshot.layer(l).positions.resize(rec.after_evict[l]);
        rec.bytes_after_evict = kv_cache_bytes_actual(snapshot, s, opts.batch);
        rec.bytes = kv_cache_bytes_actual(cache, s, opts.batch);
        rep.peak_bytes = std::max(rep.peak_bytes, rec.bytes);

        token = model.next_token(x);
        rec.token = token;
        rep.generated.push_back(token);
        fnv_u32(fp, token);
        for (float v : x) fnv_u32(fp, std::bit_cast<std::uint32_t>(v));
        rep.hidden.insert(rep.hidden.end(), x.begin(), x.end());
        rep.steps.push_back(std::move(rec));
    }
    rep.fingerprint = fp;
    return rep;
}

PrefillTrace make_planted_trace(std::uint32_t n_layer, std::uint32_t d_model, std::uint32_t prompt_len,
                                const std::set<std::uint32_t>& important, std::uint64_t seed) {
    if (n_layer < 1 || d_model < 2 || prompt_len < 1) {
        throw InvalidArgument("planted trace needs n_layer >= 1, d_model >= 2, prompt_len >= 1");
    }
    for (auto l : important) {
        if (l >= n_layer) throw InvalidArgument("planted layer " + std::to_string(l) + " out of range");
    }
    DeterministicRng rng(seed);
    auto trace = PrefillTrace::allocate(n_layer, d_model, prompt_len);
    std::vector<double> noise(d_model);
    for (std::uint32_t l = 0; l < n_layer; ++l) {
        const bool is_important = important.count(l) != 0;
        for (std::uint32_t t = 0; t < prompt_len; ++t) {
            auto a = trace.pre_vec(l, t);
            auto b = trace.post_vec(l, t);
            double norm_a = 0.0;
            for (auto& v : a) {
                v = static_cast<float>(rng.gaussian());
                norm_a += static_cast<double>(v) * v;
            }
            norm_a = std::sqrt(norm_a);
            if (is_important) {
                for (auto& v : b) v = static_cast<float>(rng.gaussian());
                continue;
            }
            double norm_n = 0.0;
            for (auto& v : noise) {
                v = rng.gaussian();
                norm_n += v * v;
            }
            norm_n = std::sqrt(norm_n);
            // Noise norm in [0.1, 1] * 1e-3 * |A|.
            const double target = (0.1 + 0.9 * rng.uniform()) * 1e-3 * norm_a;
            for (std::uint32_t i = 0; i < d_model; ++i) {
                b[i] = static_cast<float>(a[i] + noise[i] * target / norm_n);
            }
        }
    }
    return trace;
}

TokenCount budget_from_fraction(double fraction, TokenCount prompt_len) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("budget fraction must lie in (0, 1], got " + std::to_string(fraction));
    }
    const auto b = static_cast<TokenCount>(std::floor(fraction * static_cast<double>(prompt_len) + 1e-9));
    return std::max<TokenCount>(1, b);
}

}  // namespace squeezekv
