// SPDX-License-Identifier: Apache-2.0
#include "rollup/validity.hpp"

namespace rollup {

bool reexec_check_block(const RollupState& pre, std::span<const Transaction> txs,
                        const CommittedBlockClaim& claim) {
    if (claim.isr_interval == 0) return false;
    if (claim.tx_count != txs.size()) return false;
    const RollupBlock block =
        execute_block(pre, txs, claim.isr_interval, claim.rollup_height);
    return claim_of(block) == claim;
}

Bytes HistoryStatement::encode() const {
    ByteWriter w;
    w.put_u64(tx_count);
    w.put_raw(history_root.bytes);
    w.put_raw(state_root.bytes);
    return w.bytes();
}

Digest HistoryStatement::hash() const { return tagged_hash("vp.history", encode()); }

ProvingService::ProvingService(uint64_t seed) {
    Hasher h;
    h.put_str("vp.secret");
    h.put_u64(seed);
    secret_ = h.finalize();
}

Digest ProvingService::block_token(const CommittedBlockClaim& claim) const {
    Hasher h;
    h.put_str("vp.token.block");
    h.put_digest(secret_);
    h.put_digest(claim.hash());
    return h.finalize();
}

Digest ProvingService::history_token(const HistoryStatement& stmt) const {
    Hasher h;
    h.put_str("vp.token.history");
    h.put_digest(secret_);
    h.put_digest(stmt.hash());
    return h.finalize();
}

std::optional<ValidityProof> ProvingService::prove_block(
    const RollupState& pre, std::span<const Transaction> txs,
    const CommittedBlockClaim& claim) const {
    if (!reexec_check_block(pre, txs, claim)) return std::nullopt;
    return ValidityProof{ProofMode::kIdeal, claim, block_token(claim)};
}

bool ProvingService::verify_block(const ValidityProof& proof) const {
    return proof.mode == ProofMode::kIdeal && proof.token == block_token(proof.claim);
}

RecursiveValidityProof ProvingService::prove_history(
    const RollupState& genesis, std::span<const Transaction> txs) const {
    RollupState state = genesis;
    MmrPeaks peaks;
    for (const Transaction& tx : txs) {
        state = apply_tx(state, tx);
        peaks.append(history_leaf(tx, state_root(state)));
    }
    HistoryStatement stmt{txs.size(), peaks.root(), state_root(state)};
    return RecursiveValidityProof{ProofMode::kIdeal, stmt, history_token(stmt)};
}

std::optional<RecursiveValidityProof> ProvingService::extend_history(
    const RecursiveValidityProof& prev, const RollupState& state_at_prev,
    const MmrPeaks& peaks_at_prev, std::span<const Transaction> delta) const {
    if (!verify_history(prev)) return std::nullopt;
    if (peaks_at_prev.size != prev.statement.tx_count) return std::nullopt;
    if (peaks_at_prev.root() != prev.statement.history_root) return std::nullopt;
    if (state_root(state_at_prev) != prev.statement.state_root) return std::nullopt;

    RollupState state = state_at_prev;
    MmrPeaks peaks = peaks_at_prev;
    for (const Transaction& tx : delta) {
        state = apply_tx(state, tx);
        peaks.append(history_leaf(tx, state_root(state)));
    }
    HistoryStatement stmt{prev.statement.tx_count + delta.size(), peaks.root(),
                          state_root(state)};
    return RecursiveValidityProof{ProofMode::kIdeal, stmt, history_token(stmt)};
}

bool ProvingService::verify_history(const RecursiveValidityProof& proof) const {
    return proof.mode == ProofMode::kIdeal &&
           proof.token == history_token(proof.statement);
}

} // namespace rollup
