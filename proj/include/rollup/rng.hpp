// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rollup/sha256.hpp"

namespace rollup {

// Deterministic PRNG with a fixed algorithm (xoshiro256**) so traces are
// byte-identical across platforms and standard libraries. std::uniform_int_
// distribution is deliberately avoided: its output is unspecified.
class DetRng {
public:
    explicit DetRng(uint64_t seed);

    /// Independent stream derived from (seed, tag) via the repo hash.
    static DetRng derive(uint64_t seed, std::string_view tag);
    static DetRng derive(uint64_t seed, std::string_view tag, const Digest& salt);

    uint64_t next();

    /// Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    uint64_t below(uint64_t bound);

    /// k distinct values from [0, n), in sampling order (partial Fisher-Yates).
    std::vector<uint32_t> sample_distinct(uint32_t n, uint32_t k);

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    /// True with probability num/den.
    bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

private:
    uint64_t s_[4];

    void seed_from(const Digest& d);
};

} // namespace rollup
