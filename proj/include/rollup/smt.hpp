// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rollup/bytes.hpp"
#include "rollup/sha256.hpp"

namespace rollup {

inline constexpr uint32_t kSmtDepth = 32;

// Account record committed at a leaf. An account that was never touched has
// the all-zero record, represented by a keyless "empty" leaf so that absence
// is provable with the same proof shape as presence.
struct AccountRecord {
    uint64_t balance = 0;
    uint64_t nonce = 0;

    bool is_empty() const { return balance == 0 && nonce == 0; }
    bool operator==(const AccountRecord&) const = default;
};

// Leaf position derives from the account id, not from insertion order.
uint32_t smt_key_index(const std::string& key);

struct SmtLeaf {
    std::string key;
    AccountRecord record;
};

// Siblings along the root-to-leaf path: siblings[0] pairs with the child of
// the root, siblings[kSmtDepth-1] with the leaf itself.
struct SmtProof {
    std::array<Digest, kSmtDepth> siblings{};
};

struct SmtWitness {
    std::string key;
    AccountRecord record; // pre-update value (all-zero for absent accounts)
    SmtProof proof;
};

Digest smt_leaf_digest(const std::string& key, const AccountRecord& record);
Digest smt_empty_subtree(uint32_t level); // level 0 = whole tree, kSmtDepth = leaf

/// Root of the full tree described by `leaves` (keyed by smt_key_index).
Digest smt_root(const std::map<uint32_t, SmtLeaf>& leaves);

SmtProof smt_prove(const std::map<uint32_t, SmtLeaf>& leaves, const std::string& key);

bool smt_verify(const Digest& root, const std::string& key, const AccountRecord& record,
                const SmtProof& proof);

/// Checks every witness against `root`, swaps in `new_records` (parallel to
/// `witnesses`), and returns the resulting root. Overlapping paths are
/// cross-checked; any inconsistency yields nullopt. This is how a verifier
/// replays a state transition from proofs alone, without the full tree.
std::optional<Digest> smt_apply_witnessed(const Digest& root,
                                          const std::vector<SmtWitness>& witnesses,
                                          const std::vector<AccountRecord>& new_records);

} // namespace rollup
