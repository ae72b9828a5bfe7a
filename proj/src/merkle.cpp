// SPDX-License-Identifier: Apache-2.0
#include "rollup/merkle.hpp"

#include "rollup/error.hpp"

namespace rollup {

namespace {

// Largest power of two strictly below n (n >= 2).
uint64_t left_width(uint64_t n) {
    uint64_t k = 1;
    while (k * 2 < n) k *= 2;
    return k;
}

Digest root_of(std::span<const Digest> leaves) {
    if (leaves.size() == 1) return leaves[0];
    const uint64_t k = left_width(leaves.size());
    return merkle_node(root_of(leaves.subspan(0, k)), root_of(leaves.subspan(k)));
}

void prove_into(std::span<const Digest> leaves, uint64_t index, std::vector<Digest>& out) {
    if (leaves.size() == 1) return;
    const uint64_t k = left_width(leaves.size());
    if (index < k) {
        prove_into(leaves.subspan(0, k), index, out);
        out.push_back(root_of(leaves.subspan(k)));
    } else {
        prove_into(leaves.subspan(k), index - k, out);
        out.push_back(root_of(leaves.subspan(0, k)));
    }
}

// Rebuild the root from a leaf and its siblings; `level` counts unconsumed
// siblings and must hit zero exactly at the leaf.
bool reconstruct(uint64_t index, uint64_t count, const Digest& leaf,
                 const std::vector<Digest>& sibs, size_t level, Digest& out) {
    if (count == 1) {
        if (level != 0) return false;
        out = leaf;
        return true;
    }
    if (level == 0) return false;
    const uint64_t k = left_width(count);
    const Digest& sib = sibs[level - 1];
    Digest inner;
    if (index < k) {
        if (!reconstruct(index, k, leaf, sibs, level - 1, inner)) return false;
        out = merkle_node(inner, sib);
    } else {
        if (!reconstruct(index - k, count - k, leaf, sibs, level - 1, inner)) return false;
        out = merkle_node(sib, inner);
    }
    return true;
}

} // namespace

Digest merkle_leaf(BytesView data) {
    Hasher h;
    h.put_str("merkle.leaf");
    h.update(data);
    return h.finalize();
}

Digest merkle_node(const Digest& left, const Digest& right) {
    Hasher h;
    h.put_str("merkle.node");
    h.put_digest(left);
    h.put_digest(right);
    return h.finalize();
}

namespace {

// The outer wrapper commits the leaf count, so a proof's (index, leaf_count)
// pair cannot be reinterpreted against a tree of a different size.
Digest wrap_root(uint64_t count, const Digest& inner) {
    Hasher h;
    h.put_str("merkle.list");
    h.put_u64(count);
    h.put_digest(inner);
    return h.finalize();
}

} // namespace

Digest merkle_root(std::span<const Digest> leaves) {
    if (leaves.empty()) return wrap_root(0, tagged_hash("merkle.empty", {}));
    return wrap_root(leaves.size(), root_of(leaves));
}

MerklePath merkle_prove(std::span<const Digest> leaves, uint64_t index) {
    if (index >= leaves.size())
        throw Error(Errc::BadConfig, "merkle_prove: index out of range");
    MerklePath path;
    path.index = index;
    path.leaf_count = leaves.size();
    prove_into(leaves, index, path.siblings);
    return path;
}

bool merkle_verify(const Digest& root, const Digest& leaf, const MerklePath& path) {
    if (path.leaf_count == 0 || path.index >= path.leaf_count) return false;
    Digest computed;
    if (!reconstruct(path.index, path.leaf_count, leaf, path.siblings,
                     path.siblings.size(), computed))
        return false;
    return wrap_root(path.leaf_count, computed) == root;
}

} // namespace rollup
