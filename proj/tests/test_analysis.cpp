// SPDX-License-Identifier: Apache-2.0
// Capacity arithmetic: throughput limits, scaling ratios, sharding gains.
#include <doctest.h>

#include "rollup/analysis.hpp"
#include "rollup/error.hpp"
#include "rollup/rng.hpp"

using namespace rollup;

TEST_CASE("throughput: data-limited until the execution ceiling binds") {
    // 1000 bytes/block * 2 blocks / 40 gas-units demand = 50; cap at 30.
    CHECK(throughput(1000, 2, {10, 10, 10, 10}, 100) == doctest::Approx(50.0));
    CHECK(throughput(1000, 2, {10, 10, 10, 10}, 30) == doctest::Approx(30.0));
    CHECK_THROWS_AS(throughput(0, 2, {10}, 30), Error);
    CHECK_THROWS_AS(throughput(10, 0, {10}, 30), Error);
    CHECK_THROWS_AS(throughput(10, 1, {}, 30), Error);
}

TEST_CASE("scalability ratio") {
    CHECK(scalability(10, {10, 10, 5}) == doctest::Approx(0.4));
    CHECK_THROWS_AS(scalability(10, {0, 0}), Error);
}

TEST_CASE("sharding gain: the pinned two-rollup example") {
    // One slot, two rollups; running everything costs 10 per rollup, while a
    // sharded node pays 5 for its own.
    ShardingGain g = sharding_gain({{10, 10}}, {{5, 5}});
    CHECK(g.before == doctest::Approx(0.1));
    CHECK(g.after == doctest::Approx(0.4));
    CHECK(g.factor == doctest::Approx(4.0));
}

TEST_CASE("sharding gain: factor at least m for uniform-budget profiles") {
    DetRng rng(20260826);
    for (int iter = 0; iter < 100; ++iter) {
        const size_t m = 2 + rng.below(5);
        const size_t slots = 1 + rng.below(20);
        std::vector<std::vector<uint64_t>> unsharded(slots), sharded(slots);
        for (size_t i = 0; i < slots; ++i) {
            // Sharded costs first; the unsharded budget is one uniform
            // per-rollup figure at least the row maximum.
            uint64_t row_max = 1;
            for (size_t j = 0; j < m; ++j) {
                const uint64_t c = 1 + rng.below(50);
                sharded[i].push_back(c);
                row_max = std::max(row_max, c);
            }
            const uint64_t budget = row_max + rng.below(20);
            unsharded[i].assign(m, budget);
        }
        ShardingGain g = sharding_gain(unsharded, sharded);
        CHECK(g.factor >= static_cast<double>(m) - 1e-9);
        CHECK(g.after >= g.before);
    }
}

TEST_CASE("sharding gain: skewed profiles report factors below m, unclamped") {
    // One hot rollup dominates both views; sharding then buys almost nothing.
    ShardingGain g = sharding_gain({{10, 1}}, {{10, 1}});
    CHECK(g.factor == doctest::Approx(11.0 / 10.0));
    CHECK(g.factor < 2.0);

    // Sharding can even lose when the sharded execution is costlier.
    ShardingGain worse = sharding_gain({{5, 5}}, {{20, 20}});
    CHECK(worse.factor == doctest::Approx(0.5));
}

TEST_CASE("sharding gain: malformed profiles throw") {
    CHECK_THROWS_AS(sharding_gain({}, {}), Error);
    CHECK_THROWS_AS(sharding_gain({{1, 2}}, {{1, 2}, {3, 4}}), Error);
    CHECK_THROWS_AS(sharding_gain({{1, 2}}, {{1}}), Error);
    CHECK_THROWS_AS(sharding_gain({{0, 0}}, {{0, 0}}), Error);
}
