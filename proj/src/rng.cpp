// SPDX-License-Identifier: Apache-2.0
#include "rollup/rng.hpp"

#include <cstring>

#include "rollup/error.hpp"

namespace rollup {

namespace {

inline uint64_t rotl(uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

void DetRng::seed_from(const Digest& d)
{
    for (int i = 0; i < 4; ++i) {
        uint64_t v = 0;
        for (int j = 0; j < 8; ++j)
            v |= static_cast<uint64_t>(d.bytes[8 * i + j]) << (8 * j);
        s_[i] = v;
    }
    // xoshiro must not start from the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = 0x9e3779b97f4a7c15ull;
}

DetRng::DetRng(uint64_t seed)
{
    Hasher h;
    h.put_str("rng.seed");
    h.put_u64(seed);
    seed_from(h.finalize());
}

DetRng DetRng::derive(uint64_t seed, std::string_view tag)
{
    DetRng r(0);
    Hasher h;
    h.put_str("rng.derive");
    h.put_u64(seed);
    h.put_str(tag);
    r.seed_from(h.finalize());
    return r;
}

DetRng DetRng::derive(uint64_t seed, std::string_view tag, const Digest& salt)
{
    DetRng r(0);
    Hasher h;
    h.put_str("rng.derive");
    h.put_u64(seed);
    h.put_str(tag);
    h.put_digest(salt);
    r.seed_from(h.finalize());
    return r;
}

uint64_t DetRng::next()
{
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

uint64_t DetRng::below(uint64_t bound)
{
    if (bound == 0)
        throw Error(Errc::BadConfig, "DetRng::below(0)");
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        uint64_t r = next();
        if (r >= threshold)
            return r % bound;
    }
}

std::vector<uint32_t> DetRng::sample_distinct(uint32_t n, uint32_t k)
{
    if (k > n)
        throw Error(Errc::SampleCountTooLarge, "sample size exceeds population");
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; ++i)
        pool[i] = i;
    std::vector<uint32_t> out;
    out.reserve(k);
    for (uint32_t i = 0; i < k; ++i) {
        uint64_t j = i + below(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

} // namespace rollup
