// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "rollup/node.hpp"

namespace rollup {

// Validity (ZK-style) proofs, modelled two ways with identical acceptance:
//   kReexec -- the verifier replays the data itself (the oracle); and
//   kIdeal  -- a proving service re-executes privately and emits a
//              constant-size token only for true statements, verified O(1).
// Soundness in kIdeal rests on the service secret: nobody who lacks it can
// mint a token, and the service refuses false claims, so holding a verifying
// token == the statement re-executes.

enum class ProofMode : uint8_t { kReexec = 0, kIdeal = 1 };

/// Re-executes `txs` from `pre` and compares every field of the claim.
/// The kReexec verifier, and the ground truth kIdeal is held to.
bool reexec_check_block(const RollupState& pre, std::span<const Transaction> txs,
                        const CommittedBlockClaim& claim);

struct ValidityProof {
    ProofMode mode = ProofMode::kIdeal;
    CommittedBlockClaim claim;
    Digest token; // MAC over the claim under the service secret (kIdeal)
};

/// Statement for a whole execution history rather than one block; what a
/// recursively composed proof attests to.
struct HistoryStatement {
    uint64_t tx_count = 0;
    Digest history_root;  // MMR over (tx, post root) leaves
    StateRoot state_root; // root after the full history

    Bytes encode() const;
    Digest hash() const;
    bool operator==(const HistoryStatement&) const = default;
};

struct RecursiveValidityProof {
    ProofMode mode = ProofMode::kIdeal;
    HistoryStatement statement;
    Digest token;
};

class ProvingService {
public:
    explicit ProvingService(uint64_t seed);

    /// Proves a block claim by re-executing it; nullopt for any false claim.
    std::optional<ValidityProof> prove_block(const RollupState& pre,
                                             std::span<const Transaction> txs,
                                             const CommittedBlockClaim& claim) const;
    bool verify_block(const ValidityProof& proof) const;

    /// Proves the full-history statement for a ledger executed from genesis.
    RecursiveValidityProof prove_history(const RollupState& genesis,
                                         std::span<const Transaction> txs) const;

    /// Recursive composition: extends a verified history proof by `delta`
    /// without revisiting the prefix. `state_at_prev` / `peaks_at_prev` must
    /// be the execution state the previous statement attests to; nullopt when
    /// anything fails to check.
    std::optional<RecursiveValidityProof> extend_history(
        const RecursiveValidityProof& prev, const RollupState& state_at_prev,
        const MmrPeaks& peaks_at_prev, std::span<const Transaction> delta) const;

    bool verify_history(const RecursiveValidityProof& proof) const;

private:
    Digest secret_;

    Digest block_token(const CommittedBlockClaim& claim) const;
    Digest history_token(const HistoryStatement& stmt) const;
};

} // namespace rollup
