// SPDX-License-Identifier: Apache-2.0
#include "rollup/mmr.hpp"

namespace rollup {

Digest mmr_node(const Digest& left, const Digest& right) {
    Hasher h;
    h.put_str("mmr.node");
    h.put_digest(left);
    h.put_digest(right);
    return h.finalize();
}

Digest MmrPeaks::root() const {
    // Bag right to left so every peak's position is fixed by the fold order.
    Digest acc = tagged_hash("mmr.bag.base", {});
    for (auto it = peaks.rbegin(); it != peaks.rend(); ++it) {
        Hasher h;
        h.put_str("mmr.bag");
        h.put_digest(it->second);
        h.put_digest(acc);
        acc = h.finalize();
    }
    Hasher h;
    h.put_str("mmr.root");
    h.put_u64(size);
    h.put_digest(acc);
    return h.finalize();
}

void MmrPeaks::append(const Digest& leaf) {
    uint32_t height = 0;
    Digest carry = leaf;
    while (!peaks.empty() && peaks.back().first == height) {
        carry = mmr_node(peaks.back().second, carry);
        peaks.pop_back();
        ++height;
    }
    peaks.emplace_back(height, carry);
    ++size;
}

void Mmr::append(const Digest& leaf) {
    leaves_.push_back(leaf);
    peaks_.append(leaf);
}

MmrPeaks Mmr::prefix_peaks(uint64_t count) const {
    MmrPeaks p;
    for (uint64_t i = 0; i < count && i < leaves_.size(); ++i) p.append(leaves_[i]);
    return p;
}

Digest Mmr::prefix_root(uint64_t count) const {
    return prefix_peaks(count).root();
}

bool mmr_verify_append(const MmrPeaks& before, const Digest& leaf,
                       const Digest& root_before, const Digest& root_after) {
    if (before.root() != root_before) return false;
    MmrPeaks after = before;
    after.append(leaf);
    return after.root() == root_after;
}

} // namespace rollup
