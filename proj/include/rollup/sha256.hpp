// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "rollup/bytes.hpp"

namespace rollup {

// Single fixed 256-bit hash for every commitment in the repo (state roots,
// block hashes, chunk trees, signatures, trace digests).
struct Digest {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    bool is_zero() const
    {
        for (uint8_t b : bytes)
            if (b != 0)
                return false;
        return true;
    }

    std::string hex() const { return to_hex(bytes); }
    static Digest from_hex(std::string_view hex);
};

Digest sha256(BytesView data);

/// Streaming SHA-256 with the canonical-encoding helpers layered on top, so
/// hash preimages follow the same byte layout as the wire formats.
class Hasher {
public:
    Hasher();
    void update(BytesView data);
    Digest finalize();

    Hasher& put_u8(uint8_t v);
    Hasher& put_u32(uint32_t v);
    Hasher& put_u64(uint64_t v);
    Hasher& put_bytes(BytesView data);   // u32 length prefix + raw
    Hasher& put_str(std::string_view s); // u32 length prefix + raw
    Hasher& put_digest(const Digest& d); // raw 32 bytes

private:
    uint32_t state_[8];
    uint64_t length_ = 0;
    uint8_t block_[64];
    size_t block_len_ = 0;

    void compress(const uint8_t* chunk);
};

/// Domain-separated hash: sha256(tag_len ‖ tag ‖ payload).
Digest tagged_hash(std::string_view tag, BytesView payload);

} // namespace rollup
