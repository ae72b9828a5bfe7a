// SPDX-License-Identifier: Apache-2.0
#include "rollup/smt.hpp"

#include <algorithm>

#include "rollup/error.hpp"

namespace rollup {

namespace {

const std::array<Digest, kSmtDepth + 1>& empty_cache() {
    static const std::array<Digest, kSmtDepth + 1> cache = [] {
        std::array<Digest, kSmtDepth + 1> c{};
        c[kSmtDepth] = tagged_hash("smt.empty", {});
        for (int level = static_cast<int>(kSmtDepth) - 1; level >= 0; --level) {
            Hasher h;
            h.put_str("smt.node");
            h.put_digest(c[level + 1]);
            h.put_digest(c[level + 1]);
            c[level] = h.finalize();
        }
        return c;
    }();
    return cache;
}

Digest node_digest(const Digest& left, const Digest& right) {
    Hasher h;
    h.put_str("smt.node");
    h.put_digest(left);
    h.put_digest(right);
    return h.finalize();
}

using LeafIter = std::map<uint32_t, SmtLeaf>::const_iterator;

// Subtree root over leaves in [begin, end) occupying index range of width
// 2^(kSmtDepth - level) starting at `base`.
Digest subtree_root(LeafIter begin, LeafIter end, uint32_t level, uint64_t base) {
    if (begin == end) return smt_empty_subtree(level);
    if (level == kSmtDepth)
        return smt_leaf_digest(begin->second.key, begin->second.record);
    const uint64_t half = uint64_t{1} << (kSmtDepth - level - 1);
    const uint64_t mid = base + half;
    LeafIter split = begin;
    while (split != end && split->first < mid) ++split;
    return node_digest(subtree_root(begin, split, level + 1, base),
                       subtree_root(split, end, level + 1, mid));
}

} // namespace

uint32_t smt_key_index(const std::string& key) {
    const Digest d = tagged_hash("smt.key", to_bytes(key));
    return (uint32_t{d.bytes[0]} << 24) | (uint32_t{d.bytes[1]} << 16) |
           (uint32_t{d.bytes[2]} << 8) | uint32_t{d.bytes[3]};
}

Digest smt_leaf_digest(const std::string& key, const AccountRecord& record) {
    if (record.is_empty()) return smt_empty_subtree(kSmtDepth);
    Hasher h;
    h.put_str("smt.leaf");
    h.put_str(key);
    h.put_u64(record.balance);
    h.put_u64(record.nonce);
    return h.finalize();
}

Digest smt_empty_subtree(uint32_t level) {
    if (level > kSmtDepth) throw Error(Errc::BadConfig, "smt: level out of range");
    return empty_cache()[level];
}

Digest smt_root(const std::map<uint32_t, SmtLeaf>& leaves) {
    return subtree_root(leaves.begin(), leaves.end(), 0, 0);
}

SmtProof smt_prove(const std::map<uint32_t, SmtLeaf>& leaves, const std::string& key) {
    const uint32_t index = smt_key_index(key);
    SmtProof proof;
    LeafIter begin = leaves.begin(), end = leaves.end();
    uint64_t base = 0;
    for (uint32_t level = 0; level < kSmtDepth; ++level) {
        const uint64_t half = uint64_t{1} << (kSmtDepth - level - 1);
        const uint64_t mid = base + half;
        LeafIter split = begin;
        while (split != end && split->first < mid) ++split;
        const bool go_right = (index & (uint32_t{1} << (kSmtDepth - level - 1))) != 0;
        if (go_right) {
            proof.siblings[level] = subtree_root(begin, split, level + 1, base);
            begin = split;
            base = mid;
        } else {
            proof.siblings[level] = subtree_root(split, end, level + 1, mid);
            end = split;
        }
    }
    return proof;
}

bool smt_verify(const Digest& root, const std::string& key, const AccountRecord& record,
                const SmtProof& proof) {
    const uint32_t index = smt_key_index(key);
    Digest acc = smt_leaf_digest(key, record);
    for (int level = static_cast<int>(kSmtDepth) - 1; level >= 0; --level) {
        const bool right = (index & (uint32_t{1} << (kSmtDepth - 1 - level))) != 0;
        acc = right ? node_digest(proof.siblings[level], acc)
                    : node_digest(acc, proof.siblings[level]);
    }
    return acc == root;
}

namespace {

// Partial view of the tree assembled from witnesses: digests keyed by
// (level, prefix), where prefix is the top `level` bits of the leaf index.
struct PartialTree {
    std::map<std::pair<uint32_t, uint64_t>, Digest> nodes;
    std::vector<uint32_t> touched; // leaf indices, sorted, unique

    bool on_path(uint32_t level, uint64_t prefix) const {
        for (uint32_t idx : touched)
            if ((uint64_t{idx} >> (kSmtDepth - level)) == prefix) return true;
        return false;
    }

    // Insert with cross-check: two witnesses disagreeing on a shared node
    // means at least one proof is bogus.
    bool insert(uint32_t level, uint64_t prefix, const Digest& d) {
        auto [it, fresh] = nodes.try_emplace({level, prefix}, d);
        return fresh || it->second == d;
    }

    // Recompute the root, taking leaf digests from `leaf_digest` for touched
    // indices and stored siblings elsewhere. When `check_stored`, any node we
    // recompute that also has a stored value must agree (old-root pass).
    std::optional<Digest> compute(uint32_t level, uint64_t prefix,
                                  const std::map<uint32_t, Digest>& leaf_digest,
                                  bool check_stored) const {
        if (!on_path(level, prefix)) {
            auto it = nodes.find({level, prefix});
            if (it == nodes.end()) return std::nullopt;
            return it->second;
        }
        Digest out;
        if (level == kSmtDepth) {
            out = leaf_digest.at(static_cast<uint32_t>(prefix));
        } else {
            auto left = compute(level + 1, prefix * 2, leaf_digest, check_stored);
            auto right = compute(level + 1, prefix * 2 + 1, leaf_digest, check_stored);
            if (!left || !right) return std::nullopt;
            out = node_digest(*left, *right);
        }
        if (check_stored) {
            auto it = nodes.find({level, prefix});
            if (it != nodes.end() && it->second != out) return std::nullopt;
        }
        return out;
    }
};

} // namespace

std::optional<Digest> smt_apply_witnessed(const Digest& root,
                                          const std::vector<SmtWitness>& witnesses,
                                          const std::vector<AccountRecord>& new_records) {
    if (witnesses.size() != new_records.size()) return std::nullopt;
    if (witnesses.empty()) return root;

    PartialTree tree;
    std::map<uint32_t, Digest> old_leaves, new_leaves;
    for (size_t i = 0; i < witnesses.size(); ++i) {
        const auto& w = witnesses[i];
        const uint32_t index = smt_key_index(w.key);
        // Duplicate keys in one witness set are ambiguous; reject.
        if (old_leaves.count(index)) return std::nullopt;
        tree.touched.push_back(index);
        old_leaves[index] = smt_leaf_digest(w.key, w.record);
        new_leaves[index] = smt_leaf_digest(w.key, new_records[i]);
        for (uint32_t level = 0; level < kSmtDepth; ++level) {
            const uint64_t prefix = uint64_t{index} >> (kSmtDepth - level - 1);
            if (!tree.insert(level + 1, prefix ^ 1, w.proof.siblings[level]))
                return std::nullopt;
        }
    }
    std::sort(tree.touched.begin(), tree.touched.end());

    auto old_root = tree.compute(0, 0, old_leaves, /*check_stored=*/true);
    if (!old_root || *old_root != root) return std::nullopt;
    return tree.compute(0, 0, new_leaves, /*check_stored=*/false);
}

} // namespace rollup
