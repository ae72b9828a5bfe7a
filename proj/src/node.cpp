// SPDX-License-Identifier: Apache-2.0
#include "rollup/node.hpp"

#include "rollup/error.hpp"

namespace rollup {

namespace {

std::vector<Digest> block_leaves(const RollupBlock& block) {
    std::vector<Digest> leaves;
    leaves.reserve(block.txs.size() + block.isrs.size());
    for (const Transaction& tx : block.txs) leaves.push_back(rb_tx_leaf(tx));
    for (const StateRoot& isr : block.isrs) leaves.push_back(rb_isr_leaf(isr));
    return leaves;
}

} // namespace

uint32_t isr_count_for(uint64_t tx_count, uint32_t isr_interval) {
    if (isr_interval == 0) throw Error(Errc::BadConfig, "isr_interval must be positive");
    return static_cast<uint32_t>((tx_count + isr_interval - 1) / isr_interval);
}

Digest rb_tx_leaf(const Transaction& tx) {
    return tagged_hash("rb.tx", tx.encode());
}

Digest rb_isr_leaf(const StateRoot& root) {
    return tagged_hash("rb.isr", root.bytes);
}

Digest RollupBlock::tx_root() const {
    return merkle_root(block_leaves(*this));
}

MerklePath prove_tx(const RollupBlock& block, uint64_t tx_index) {
    return merkle_prove(block_leaves(block), tx_index);
}

MerklePath prove_isr(const RollupBlock& block, uint32_t isr_index) {
    return merkle_prove(block_leaves(block), block.txs.size() + isr_index);
}

Bytes CommittedBlockClaim::encode() const {
    ByteWriter w;
    w.put_u64(rollup_height);
    w.put_u64(tx_count);
    w.put_u32(isr_interval);
    w.put_raw(tx_root.bytes);
    w.put_raw(prev_state_root.bytes);
    w.put_raw(state_root.bytes);
    return w.take();
}

Digest CommittedBlockClaim::hash() const {
    return tagged_hash("claim", encode());
}

CommittedBlockClaim claim_of(const RollupBlock& block) {
    CommittedBlockClaim claim;
    claim.rollup_height = block.height;
    claim.tx_count = block.txs.size();
    claim.isr_interval = block.isr_interval;
    claim.tx_root = block.tx_root();
    claim.prev_state_root = block.prev_state_root;
    claim.state_root = block.state_root;
    return claim;
}

Digest history_leaf(const Transaction& tx, const StateRoot& post_root) {
    Hasher h;
    h.put_str("history.leaf");
    h.put_bytes(tx.encode());
    h.put_digest(post_root);
    return h.finalize();
}

const RollupState& ChainView::state_before(size_t block_index) const {
    if (block_index == 0) return genesis_state;
    return post_states.at(block_index - 1);
}

RollupBlock execute_block(const RollupState& pre, std::span<const Transaction> txs,
                          uint32_t isr_interval, uint64_t height) {
    if (isr_interval == 0) throw Error(Errc::BadConfig, "isr_interval must be positive");
    RollupBlock block;
    block.height = height;
    block.prev_state_root = state_root(pre);
    block.isr_interval = isr_interval;
    RollupState st = pre;
    for (size_t i = 0; i < txs.size(); ++i) {
        block.txs.push_back(txs[i]);
        st = apply_tx(st, txs[i]);
        if ((i + 1) % isr_interval == 0 || i + 1 == txs.size())
            block.isrs.push_back(state_root(st));
    }
    block.state_root = block.isrs.empty() ? block.prev_state_root : block.isrs.back();
    return block;
}

ChainView build_rollup_chain(const std::vector<SourcedTx>& ledger,
                             const BuildParams& params, const RollupState& genesis) {
    if (params.batch_size == 0) throw Error(Errc::BadConfig, "batch_size must be positive");
    if (params.isr_interval == 0)
        throw Error(Errc::BadConfig, "isr_interval must be positive");

    ChainView view;
    view.genesis_state = genesis;
    view.head_state = genesis;
    view.txs = ledger;

    for (size_t start = 0; start < ledger.size(); start += params.batch_size) {
        const size_t end = std::min(ledger.size(), start + params.batch_size);
        std::vector<Transaction> batch;
        for (size_t i = start; i < end; ++i) batch.push_back(ledger[i].tx);

        RollupBlock block = execute_block(view.head_state, batch, params.isr_interval,
                                          view.blocks.size() + 1);
        block.source_height = ledger[start].parent_height;
        block.source_item = ledger[start].item_index;

        for (size_t i = start; i < end; ++i) {
            view.head_state = apply_tx(view.head_state, ledger[i].tx);
            const StateRoot after = state_root(view.head_state);
            view.tx_roots_after.push_back(after);
            view.history.append(history_leaf(ledger[i].tx, after));
        }
        view.post_states.push_back(view.head_state);
        view.blocks.push_back(std::move(block));
    }
    return view;
}

std::vector<SourcedTx> extract_rollup_ledger(const std::vector<ParentViewEntry>& view,
                                             const NamespaceId& ns, bool das_enabled,
                                             std::string* diagnostic) {
    std::vector<SourcedTx> ledger;
    for (const ParentViewEntry& entry : view) {
        if (!entry.finalized) break;
        if (das_enabled && !entry.available) break;
        if (!entry.rollup_items.has_value()) break;
        for (size_t i = 0; i < entry.rollup_items->size(); ++i) {
            Transaction tx;
            try {
                tx = Transaction::decode((*entry.rollup_items)[i]);
            } catch (const CodecError& e) {
                // Undecodable segment: this block contributes nothing, but the
                // chain is still consumable past it.
                if (diagnostic != nullptr)
                    *diagnostic = "parent height " + std::to_string(entry.header.height) +
                                  " item " + std::to_string(i) + ": " + e.what();
                // Roll back this block's partial contribution.
                while (!ledger.empty() &&
                       ledger.back().parent_height == entry.header.height)
                    ledger.pop_back();
                break;
            }
            if (tx.rollup != ns) continue; // foreign bytes; never replayed here
            ledger.push_back(SourcedTx{tx, entry.header.height, i});
        }
    }
    return ledger;
}

LightSyncResult light_sync(const std::vector<BlockHeader>& headers,
                           const std::vector<FinalityCertificate>& certs,
                           const std::map<uint64_t, bool>& availability,
                           const Digest& genesis_hash,
                           const std::map<uint64_t, ValidatorSet>& sets_by_epoch,
                           bool das_enabled) {
    LightSyncResult result;
    const ChainCheck chain = verify_header_chain(headers, certs, genesis_hash, sets_by_epoch);
    if (!chain.ok) {
        result.ok = false;
        result.reason = chain.reason + " at height " + std::to_string(chain.height);
        return result;
    }
    for (const BlockHeader& h : headers) {
        if (das_enabled) {
            auto it = availability.find(h.height);
            if (it == availability.end() || !it->second) {
                result.reason = "height " + std::to_string(h.height) + " unavailable";
                break;
            }
        }
        result.accepted_height = h.height;
    }
    return result;
}

} // namespace rollup
