// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rollup/bytes.hpp"

namespace rollup {

// Systematic Reed-Solomon erasure code over GF(2^8). Byte b of chunk i is the
// evaluation at x = i of the degree-<k polynomial interpolating byte b of the
// k data chunks at x = 0..k-1, so chunks 0..k-1 are the (framed) data itself
// and any k of the n chunks reconstruct the original bytes exactly.
struct CodeParams {
    uint32_t data_chunks = 0;  // k
    uint32_t total_chunks = 0; // n, expansion n/k is the code's redundancy
    uint32_t chunk_size = 0;   // bytes per chunk

    /// Throws Errc::BadConfig unless 0 < k <= n <= 256 and chunk_size > 0.
    void validate() const;
    /// Payload capacity after the u32 length frame.
    size_t capacity() const;
    bool operator==(const CodeParams&) const = default;
};

/// Frames `body` with its length, zero-pads to k chunks, and extends to n.
/// Throws Errc::BodyTooLarge when the framed body exceeds capacity.
std::vector<Bytes> rs_encode(BytesView body, const CodeParams& params);

/// Rebuilds the exact original body from any >= k distinct (index, chunk)
/// pairs. Throws Errc::InsufficientChunks otherwise.
Bytes rs_reconstruct(const std::vector<std::pair<uint32_t, Bytes>>& chunks,
                     const CodeParams& params);

} // namespace rollup
