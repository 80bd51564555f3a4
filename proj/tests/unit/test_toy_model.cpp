// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "squeezekv/error.hpp"
#include "squeezekv/toy_model.hpp"

using namespace squeezekv;

TEST_CASE("rng is reproducible and in range") {
    DeterministicRng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 1000; ++i) CHECK(a.below(7) < 7);
    CHECK_THROWS_AS(a.below(0), InvalidArgument);
}

TEST_CASE("centered draws have the requested spread") {
    DeterministicRng rng(3);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.centered(0.5);
        CHECK(std::abs(v) <= 0.5 * std::sqrt(3.0));
        sum += v;
        sq += v * v;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01).scale(1.0));
    CHECK(std::sqrt(sq / n) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("weights are seeded") {
    ToyModelSpec spec{make_shape(2, 16, 2, 2), 5};
    ToyModel a(spec), b(spec);
    CHECK(a.layer(1).w_k.data == b.layer(1).w_k.data);
    spec.seed = 6;
    ToyModel c(spec);
    CHECK(a.layer(1).w_k.data != c.layer(1).w_k.data);
    CHECK(a.layer(0).w_up.cols == 64);
    CHECK(a.layer(0).w_down.rows == 64);
}

TEST_CASE("left multiply agrees with the long double oracle") {
    ToyModel m(ToyModelSpec{make_shape(1, 32, 4, 2), 9});
    const auto x = m.embed(17, 3);
    const auto& w = m.layer(0).w_v;
    const auto got = w.left_multiply(x);
    const auto want = oracle::matvec(x, w.data, w.cols);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(static_cast<double>(want[i])).epsilon(1e-6));
}

TEST_CASE("rms norm yields unit mean square") {
    const std::vector<float> x{3, -4, 12, 0.5f};
    const auto y = rms_norm(x);
    double ms = 0;
    for (float v : y) ms += static_cast<double>(v) * v;
    CHECK(ms / 4 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("grouped-query shapes") {
    ToyModelSpec spec{make_shape(2, 32, 4, 2), 1};
    spec.shape.kv_dim = 16;
    ToyModel m(spec);
    CHECK(m.kv_heads() == 2);
    spec.shape.kv_dim = 12;
    CHECK_THROWS_AS(ToyModel{spec}, InvalidArgument);
}

TEST_CASE("prompts and tokens stay in the vocabulary") {
    const auto p = make_prompt(50, 200, 4);
    CHECK(p == make_prompt(50, 200, 4));
    for (auto t : p) CHECK(t < 50);
    ToyModel m(ToyModelSpec{make_shape(1, 16, 2, 2), 1, 0.15, 50});
    CHECK(m.next_token(m.embed(3, 0)) < 50);
    CHECK_THROWS_AS(m.embed(50, 0), InvalidArgument);
}
