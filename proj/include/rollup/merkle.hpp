// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rollup/bytes.hpp"
#include "rollup/sha256.hpp"

namespace rollup {

// Binary Merkle tree over an ordered list of leaves. Interior split puts the
// largest power of two on the left, so any leaf count works without
// duplication tricks. Leaf and node hashes are domain-separated, and a proof
// is bound to its position by (index, leaf_count).
struct MerklePath {
    uint64_t index = 0;
    uint64_t leaf_count = 0;
    std::vector<Digest> siblings; // leaf-adjacent first, top split last
};

Digest merkle_leaf(BytesView data);
Digest merkle_node(const Digest& left, const Digest& right);

/// Root over pre-hashed leaves; empty list has a fixed sentinel root.
Digest merkle_root(std::span<const Digest> leaves);

MerklePath merkle_prove(std::span<const Digest> leaves, uint64_t index);

/// True iff `leaf` sits at path.index in a tree of path.leaf_count leaves
/// with root `root`. Never throws; malformed paths return false.
bool merkle_verify(const Digest& root, const Digest& leaf, const MerklePath& path);

} // namespace rollup
