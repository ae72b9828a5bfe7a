// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rollup/mmr.hpp"
#include "rollup/parent.hpp"
#include "rollup/state.hpp"

namespace rollup {

// Rollup full-node logic: pull ordered transactions out of finalized parent
// blocks, execute them, and commit the results in a dispute-friendly shape
// (per-batch blocks whose tx_root also commits intermediate state roots, and
// a per-transaction MMR for cross-prover comparison).

struct SourcedTx {
    Transaction tx;
    uint64_t parent_height = 0; // where the bytes were ordered
    uint64_t item_index = 0;    // position inside the rollup segment

    bool operator==(const SourcedTx&) const = default;
};

struct RollupBlock {
    uint64_t height = 0; // rollup height, 1-based
    StateRoot prev_state_root;
    std::vector<Transaction> txs;
    uint32_t isr_interval = 1;   // txs per intermediate root
    std::vector<StateRoot> isrs; // root after each interval; last = post root
    StateRoot state_root;
    uint64_t source_height = 0; // parent height of the first tx
    uint64_t source_item = 0;

    /// Commits txs and isrs together: leaves [0, txs) are transactions,
    /// leaves [txs, txs + isrs) the intermediate roots.
    Digest tx_root() const;
    uint32_t isr_count() const { return static_cast<uint32_t>(isrs.size()); }
};

/// Expected number of intermediate roots for a tx count and interval.
uint32_t isr_count_for(uint64_t tx_count, uint32_t isr_interval);

Digest rb_tx_leaf(const Transaction& tx);
Digest rb_isr_leaf(const StateRoot& root);

MerklePath prove_tx(const RollupBlock& block, uint64_t tx_index);
MerklePath prove_isr(const RollupBlock& block, uint32_t isr_index);

/// What a root submitter puts on chain about one rollup block; everything a
/// verifier needs to check openings without the block itself.
struct CommittedBlockClaim {
    uint64_t rollup_height = 0;
    uint64_t tx_count = 0;
    uint32_t isr_interval = 1;
    Digest tx_root;
    StateRoot prev_state_root;
    StateRoot state_root;

    Bytes encode() const;
    Digest hash() const;
    bool operator==(const CommittedBlockClaim&) const = default;
};

CommittedBlockClaim claim_of(const RollupBlock& block);

/// MMR leaf per executed transaction: the bytes and the state root right
/// after them. Equal MMR roots imply equal execution histories.
Digest history_leaf(const Transaction& tx, const StateRoot& post_root);

struct BuildParams {
    uint32_t batch_size = 4;   // txs per rollup block
    uint32_t isr_interval = 1; // txs per intermediate root
};

/// Executes a batch from `pre` into a block (sources left zero). The single
/// definition of the intermediate-root cadence.
RollupBlock execute_block(const RollupState& pre, std::span<const Transaction> txs,
                          uint32_t isr_interval, uint64_t height);

struct ChainView {
    RollupState genesis_state;
    std::vector<RollupBlock> blocks;
    std::vector<RollupState> post_states; // parallel to blocks
    RollupState head_state;
    Mmr history;                 // one leaf per executed tx
    std::vector<SourcedTx> txs;  // the flattened input ledger
    std::vector<StateRoot> tx_roots_after; // state root after each tx

    const RollupState& state_before(size_t block_index) const;
};

/// Executes the ledger into blocks; deterministic in (ledger, params, genesis).
ChainView build_rollup_chain(const std::vector<SourcedTx>& ledger,
                             const BuildParams& params,
                             const RollupState& genesis = {});

/// One parent block as a rollup node sees it: header plus whether the chain
/// rules let this node consume it.
struct ParentViewEntry {
    BlockHeader header;
    bool finalized = false;
    bool available = true; // sampling verdict (ignored when DAS is off)
    std::optional<std::vector<Bytes>> rollup_items; // fetched segment, if served
};

/// Longest consumable prefix of the parent view, flattened to sourced txs.
/// A block is consumable when finalized, available (only enforced with DAS
/// on), and its rollup segment was obtainable; extraction stops at the first
/// block that is not, so every node reading the same view gets the same
/// prefix. Undecodable segments void their block's contribution but do not
/// stop consumption.
std::vector<SourcedTx> extract_rollup_ledger(const std::vector<ParentViewEntry>& view,
                                             const NamespaceId& ns, bool das_enabled,
                                             std::string* diagnostic = nullptr);

struct LightSyncResult {
    uint64_t accepted_height = 0; // genesis = 0
    bool ok = true;               // false when the chain itself was malformed
    std::string reason;
};

/// Header-chain sync for light clients: verify headers and certificates,
/// then cut the prefix at the first height whose availability verdict is
/// negative or missing (DAS on only).
LightSyncResult light_sync(const std::vector<BlockHeader>& headers,
                           const std::vector<FinalityCertificate>& certs,
                           const std::map<uint64_t, bool>& availability,
                           const Digest& genesis_hash,
                           const std::map<uint64_t, ValidatorSet>& sets_by_epoch,
                           bool das_enabled);

} // namespace rollup
