// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rollup/sha256.hpp"

namespace rollup {

// Merkle mountain range: append-only accumulator over leaf digests. Peaks are
// perfect subtrees; the root bags them with the leaf count, so equal roots
// imply equal histories. `MmrPeaks` is the O(log n) carry state a verifier
// needs to replay a single append without the full leaf set.
struct MmrPeaks {
    uint64_t size = 0;
    std::vector<std::pair<uint32_t, Digest>> peaks; // (height, digest), left to right

    Digest root() const;
    void append(const Digest& leaf);
    bool operator==(const MmrPeaks&) const = default;
};

class Mmr {
public:
    void append(const Digest& leaf);
    uint64_t size() const { return leaves_.size(); }
    Digest root() const { return peaks_.root(); }
    const MmrPeaks& peaks() const { return peaks_; }

    /// Root the accumulator had after the first `count` appends.
    Digest prefix_root(uint64_t count) const;
    /// Carry state after the first `count` appends.
    MmrPeaks prefix_peaks(uint64_t count) const;

    const std::vector<Digest>& leaves() const { return leaves_; }

private:
    std::vector<Digest> leaves_;
    MmrPeaks peaks_;
};

Digest mmr_node(const Digest& left, const Digest& right);

/// One verifier-side append step: carry state `before` plus `leaf` must yield
/// roots `root_before` / `root_after`. This pins the leaf at position
/// before.size of the history committed by `root_after`.
bool mmr_verify_append(const MmrPeaks& before, const Digest& leaf,
                       const Digest& root_before, const Digest& root_after);

} // namespace rollup
