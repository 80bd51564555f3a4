// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "squeezekv/error.hpp"
#include "squeezekv/kv_model.hpp"

using namespace squeezekv;

namespace {

ModelShape llama2_7b() { return make_shape(32, 4096, 32, 2); }

constexpr Bytes kGiB = Bytes{1} << 30;

}  // namespace

TEST_CASE("llama2-7b holds half a mebibyte of kv per token") {
    CHECK(kv_bytes_per_token(llama2_7b()) == 524288);
    SimConfig one{1, 0, 1, 0};
    CHECK(kv_cache_bytes(llama2_7b(), one) == 524288);
}

TEST_CASE("single scalar per layer costs two values") {
    auto s = make_shape(1, 1, 1, 2);
    CHECK(kv_cache_bytes(s, SimConfig{1, 0, 1, 0}) == 4);
}

TEST_CASE("crossover against 14 GiB of weights") {
    // 14 * 2^30 / 2^19 divides evenly, so the cache first reaches the weights at 28672.
    CHECK(kv_weight_crossover_tokens(llama2_7b(), 1, 14 * kGiB) == 28672);
    CHECK(kv_weight_crossover_tokens(llama2_7b(), 1, 14 * kGiB + 1) == 28673);
    CHECK(kv_weight_crossover_tokens(llama2_7b(), 2, 14 * kGiB) == 14336);
}

TEST_CASE("memory grows linearly in each factor") {
    const auto s = make_shape(4, 64, 4, 2);
    const SimConfig base{10, 6, 1, 0};
    const Bytes b = kv_cache_bytes(s, base);
    CHECK(kv_cache_bytes(s, SimConfig{10, 6, 2, 0}) == 2 * b);
    CHECK(kv_cache_bytes(s, SimConfig{20, 12, 1, 0}) == 2 * b);
    CHECK(kv_cache_bytes(make_shape(8, 64, 4, 2), base) == 2 * b);
    CHECK(kv_cache_bytes(make_shape(4, 64, 4, 4), base) == 2 * b);
}

TEST_CASE("actual bytes follow retained entries") {
    auto s = make_shape(2, 8, 2, 4);
    KvCacheState cache(2);
    for (Position p = 0; p < 3; ++p) cache.layer(0).append(p);
    for (Position p = 0; p < 5; ++p) cache.layer(1).append(p);
    CHECK(kv_cache_bytes_actual(cache, s, 1) == 512);
    CHECK(kv_cache_bytes_actual(cache, s, 1) == oracle::cache_bytes({3, 5}, 8, 4, 1));
    CHECK(kv_cache_bytes_actual(cache, s, 3) == 3 * 512);
    CHECK(cache.total_entries() == 8);
}

TEST_CASE("layer count mismatch is rejected") {
    KvCacheState cache(3);
    CHECK_THROWS_AS(kv_cache_bytes_actual(cache, make_shape(2, 8, 2, 4), 1), InvalidArgument);
}

TEST_CASE("overflow is reported rather than wrapped") {
    auto s = make_shape(1u << 20, 1u << 20, 1, 8);
    CHECK_THROWS_AS(kv_cache_bytes(s, SimConfig{1u << 20, 0, 1u << 20, 0}), OverflowError);
    CHECK_THROWS_AS(checked::mul(std::numeric_limits<std::uint64_t>::max(), 2), OverflowError);
    CHECK_THROWS_AS(checked::add(std::numeric_limits<std::uint64_t>::max(), 1), OverflowError);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(make_shape(0, 64, 4, 2), InvalidArgument);
    CHECK_THROWS_AS(make_shape(2, 63, 4, 2), InvalidArgument);
    CHECK_THROWS_AS(make_shape(2, 64, 4, 0), InvalidArgument);
    CHECK_THROWS_AS((SimConfig{0, 1, 1, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SimConfig{1, 1, 0, 0}.validate()), InvalidArgument);
}

TEST_CASE("layer cache keeps positions increasing") {
    LayerCache c;
    c.append(3);
    c.append(7);
    CHECK_THROWS_AS(c.append(7), InvalidArgument);
    c.scores = {0.5, 0.25};
    c.keep({1});
    CHECK(c.positions == std::vector<Position>{7});
    CHECK(c.scores == std::vector<double>{0.25});
    c.check_invariants();
}
