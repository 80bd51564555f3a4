// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "squeezekv/error.hpp"
#include "squeezekv/eviction.hpp"

using namespace squeezekv;

namespace {

LayerCache cache_of(std::vector<Position> pos, std::vector<double> scores = {}) {
    LayerCache c;
    for (auto p : pos) c.append(p);
    if (!scores.empty()) c.scores = std::move(scores);
    return c;
}

std::vector<Position> retained(const EvictionPolicy& pol, LayerCache c, TokenCount budget) {
    evict(pol, c, budget);
    return c.positions;
}

LayerCache random_cache(std::mt19937_64& rng, std::size_t n) {
    std::vector<Position> pos;
    Position p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        p += 1 + static_cast<Position>(rng() % 3);
        pos.push_back(p - 1);
    }
    LayerCache c = cache_of(pos);
    // Few distinct score levels so ties are common.
    for (auto& s : c.scores) s = static_cast<double>(rng() % 4) * 0.25;
    return c;
}

oracle::Rule rule_of(PolicyKind k) {
    switch (k) {
        case PolicyKind::sliding_window:
            return oracle::Rule::sliding_window;
        case PolicyKind::streaming:
            return oracle::Rule::streaming;
        case PolicyKind::h2o:
            return oracle::Rule::h2o;
    }
    return oracle::Rule::sliding_window;
}

std::vector<oracle::Entry> entries_of(const LayerCache& c) {
    std::vector<oracle::Entry> out;
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back({c.positions[i], c.scores[i]});
    return out;
}

}  // namespace

TEST_CASE("sliding window keeps the newest positions") {
    EvictionPolicy pol{PolicyKind::sliding_window};
    CHECK(retained(pol, cache_of({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 4) == std::vector<Position>{6, 7, 8, 9});
}

TEST_CASE("streaming keeps sinks plus the newest positions") {
    EvictionPolicy pol{PolicyKind::streaming, 4};
    CHECK(retained(pol, cache_of({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 6) == std::vector<Position>{0, 1, 2, 3, 8, 9});
}

TEST_CASE("h2o keeps the recent half plus heavy hitters") {
    EvictionPolicy pol{PolicyKind::h2o, 4, 0.5};
    const auto c = cache_of({0, 1, 2, 3, 4, 5, 6, 7}, {9, 1, 8, 1, 1, 7, 1, 1});
    CHECK(retained(pol, c, 4) == std::vector<Position>{0, 2, 6, 7});
}

TEST_CASE("a cache within budget is untouched") {
    for (auto kind : {PolicyKind::sliding_window, PolicyKind::streaming, PolicyKind::h2o}) {
        EvictionPolicy pol{kind};
        auto c = cache_of({0, 1, 2, 3, 4, 5});
        CHECK(evict(pol, c, 6) == 0);
        CHECK(evict(pol, c, 100) == 0);
        CHECK(c.size() == 6);
    }
}

TEST_CASE("budgets below the policy floor are rejected") {
    auto c = cache_of({0, 1, 2, 3, 4, 5, 6, 7});
    CHECK_THROWS_AS(evict(EvictionPolicy{PolicyKind::sliding_window}, c, 0), BudgetFloorError);
    CHECK_THROWS_AS(evict(EvictionPolicy{PolicyKind::streaming, 4}, c, 4), BudgetFloorError);
    CHECK_THROWS_AS(evict(EvictionPolicy{PolicyKind::h2o}, c, 1), BudgetFloorError);
    CHECK(EvictionPolicy{PolicyKind::streaming, 4}.min_budget() == 5);
}

TEST_CASE("policy names round-trip") {
    for (auto kind : {PolicyKind::sliding_window, PolicyKind::streaming, PolicyKind::h2o}) {
        CHECK(parse_policy_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_policy_kind("lru"), InvalidArgument);
    CHECK_THROWS_AS((EvictionPolicy{PolicyKind::h2o, 4, 1.0}.validate()), InvalidArgument);
}

TEST_CASE("evict matches the brute-force oracle") {
    std::mt19937_64 rng(99);
    for (auto kind : {PolicyKind::sliding_window, PolicyKind::streaming, PolicyKind::h2o}) {
        for (int trial = 0; trial < 150; ++trial) {
            const std::size_t n = 1 + rng() % 12;
            const auto c = random_cache(rng, n);
            EvictionPolicy pol{kind, static_cast<std::uint32_t>(rng() % 4), 0.25 + 0.5 * (rng() % 3) / 2.0};
            const TokenCount budget = pol.min_budget() + rng() % 12;
            const auto want = oracle::brute_force_evict(rule_of(kind), entries_of(c), budget, pol.n_sink,
                                                        pol.recent_fraction);
            CHECK(retained(pol, c, budget) == want);
        }
    }
}

TEST_CASE("retained sets shrink with the budget for position-based policies") {
    std::mt19937_64 rng(3);
    for (auto kind : {PolicyKind::sliding_window, PolicyKind::streaming}) {
        EvictionPolicy pol{kind, 2};
        for (int trial = 0; trial < 50; ++trial) {
            const auto c = random_cache(rng, 12);
            for (TokenCount b = pol.min_budget(); b < 12; ++b) {
                const auto small = retained(pol, c, b);
                const auto big = retained(pol, c, b + 1);
                CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
            }
        }
    }
}

TEST_CASE("streaming without sinks is a sliding window") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = random_cache(rng, 1 + rng() % 12);
        const TokenCount b = 1 + rng() % 12;
        CHECK(retained(EvictionPolicy{PolicyKind::streaming, 0}, c, b) ==
              retained(EvictionPolicy{PolicyKind::sliding_window}, c, b));
    }
}

TEST_CASE("evicting twice changes nothing") {
    std::mt19937_64 rng(12);
    for (auto kind : {PolicyKind::sliding_window, PolicyKind::streaming, PolicyKind::h2o}) {
        EvictionPolicy pol{kind, 2};
        auto c = random_cache(rng, 12);
        evict(pol, c, 5);
        const auto once = c.positions;
        CHECK(evict(pol, c, 5) == 0);
        CHECK(c.positions == once);
        CHECK(c.size() == 5);
    }
}

TEST_CASE("score accumulation") {
    auto c = cache_of({0, 1, 2, 3});
    const std::vector<double> row{0.1, 0.2, 0.3, 0.4};
    accumulate_scores(c, row);
    accumulate_scores(c, row);
    for (std::size_t i = 0; i < 4; ++i) CHECK(c.scores[i] == doctest::Approx(2 * row[i]));

    std::mt19937_64 rng(1);
    std::vector<double> shadow(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) shadow[i] = c.scores[i];
    for (int step = 0; step < 30; ++step) {
        std::vector<double> r(c.size());
        double z = 0;
        for (auto& x : r) z += (x = 1.0 + static_cast<double>(rng() % 100));
        for (auto& x : r) x /= z;
        accumulate_scores(c, r);
        for (std::size_t i = 0; i < r.size(); ++i) shadow[i] += r[i];
    }
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.scores[i] == doctest::Approx(shadow[i]).epsilon(1e-12));

    const std::vector<double> short_row{0.5, 0.5};
    const std::vector<double> bad_sum{0.5, 0.5, 0.5, 0.5};
    const std::vector<double> negative{1.2, -0.2, 0.0, 0.0};
    CHECK_THROWS_AS(accumulate_scores(c, short_row), InvalidArgument);
    CHECK_THROWS_AS(accumulate_scores(c, bad_sum), InvalidArgument);
    CHECK_THROWS_AS(accumulate_scores(c, negative), InvalidArgument);
}
