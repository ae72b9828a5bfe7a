// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rollup/das.hpp"
#include "rollup/keys.hpp"
#include "rollup/merkle.hpp"
#include "rollup/tx.hpp"

namespace rollup {

// Lazy parent chain: single-shot quorum voting per height. Validators attest
// to ordered bytes plus a data-availability commitment; nothing here ever
// interprets segment contents, so semantically invalid rollup payloads
// finalize like any other bytes.

struct ValidatorSet {
    uint64_t epoch = 0;
    std::vector<std::pair<ValidatorId, Digest>> members; // sorted by id, unique keys

    size_t size() const { return members.size(); }
    /// Votes needed for a certificate: ceil(2n/3).
    uint32_t quorum() const;
    /// Guaranteed number of provably guilty validators whenever two
    /// conflicting certificates exist: ceil(n/3). (Quorum overlap is
    /// 2q - n, which is never smaller than this.)
    uint32_t accountability_floor() const;
    const Digest* key_of(const ValidatorId& id) const;
    bool has(const ValidatorId& id) const { return key_of(id) != nullptr; }
    ValidatorId proposer_at(uint64_t round) const; // round-robin

    static ValidatorSet make(uint64_t epoch, const std::vector<ValidatorId>& ids,
                             uint64_t key_seed);
};

struct BlockHeader {
    uint64_t height = 0;
    uint64_t epoch = 0;
    Digest parent_hash;
    Digest body_root;
    Digest da_commitment;

    Bytes encode() const;
    Digest hash() const;
    bool operator==(const BlockHeader&) const = default;
};

BlockHeader genesis_header();

// Block body: per-namespace item lists. The rollup namespace carries encoded
// transactions as items; other namespaces carry opaque blobs in the same
// container so every segment is individually openable.
struct ParentBody {
    std::map<NamespaceId, std::vector<Bytes>> segments;

    Bytes encode() const;
    static ParentBody decode(BytesView bytes); // throws CodecError
    Digest body_root() const;
    Digest item_root(const NamespaceId& ns) const;
    bool operator==(const ParentBody&) const = default;
};

struct ParentBlock {
    BlockHeader header;
    ParentBody body;
};

/// Builds the block and its erasure-coded availability commitment. Throws
/// Errc::BodyTooLarge when the encoded body exceeds the code's capacity.
ParentBlock propose(const BlockHeader& parent, uint64_t epoch, ParentBody body,
                    const CodeParams& da_params);

struct Vote {
    ValidatorId voter;
    uint64_t epoch = 0;
    uint64_t height = 0;
    Digest block_hash;
    Signature sig;

    Bytes signing_bytes() const;
    bool operator==(const Vote&) const = default;
};

Vote make_vote(const ValidatorId& voter, const Digest& key, const BlockHeader& header);
bool vote_valid(const Vote& vote, const ValidatorSet& set);

struct FinalityCertificate {
    Digest block_hash;
    uint64_t height = 0;
    uint64_t epoch = 0;
    std::vector<Vote> votes; // sorted by voter, deduplicated
};

/// Assembles a certificate from whatever votes are at hand. Throws
/// Errc::InsufficientQuorum when valid matching votes fall short.
FinalityCertificate finalize(const BlockHeader& header, const std::vector<Vote>& votes,
                             const ValidatorSet& set);

bool verify_certificate(const FinalityCertificate& cert, const ValidatorSet& set);

struct ChainCheck {
    bool ok = true;
    std::string reason;
    uint64_t height = 0; // first offending height when !ok
};

/// Header-chain verification for light clients: parent links, consecutive
/// heights, monotone epochs, and one valid certificate per header under the
/// epoch's validator set.
ChainCheck verify_header_chain(const std::vector<BlockHeader>& headers,
                               const std::vector<FinalityCertificate>& certs,
                               const Digest& genesis_hash,
                               const std::map<uint64_t, ValidatorSet>& sets_by_epoch);

// Two valid votes by one validator for different blocks at the same height
// and epoch. Self-contained: verifiable from the votes and the key alone.
struct EquivocationEvidence {
    ValidatorId validator;
    Vote vote_a;
    Vote vote_b;
};

bool verify_equivocation(const EquivocationEvidence& ev, const Digest& key);

/// Scans votes for double-signing; at most one evidence entry per validator,
/// ordered by validator id. Votes that fail signature checks are ignored.
std::vector<EquivocationEvidence> detect_equivocation(
    const std::vector<Vote>& votes, const std::map<ValidatorId, Digest>& keys);

struct ExtractResult {
    Ledger txs;
    std::string diagnostic; // non-empty when the segment was dropped
};

/// Decodes a namespace's items as transactions. Any malformed item drops the
/// whole segment (empty ledger plus a diagnostic); the block itself is
/// unaffected -- content validity is the rollup's problem, not the parent's.
ExtractResult extract_namespace(const ParentBody& body, const NamespaceId& ns);

// Opening of one item against a header's body_root: the item's path inside
// its namespace tree plus the namespace entry's path inside the body tree.
struct NamespaceOpening {
    NamespaceId ns;
    Digest item_root;
    MerklePath entry_path;
    MerklePath item_path;
};

NamespaceOpening make_item_opening(const ParentBody& body, const NamespaceId& ns,
                                   uint64_t item_index);
bool verify_item_opening(const Digest& body_root, BytesView item,
                         const NamespaceOpening& opening);

} // namespace rollup
