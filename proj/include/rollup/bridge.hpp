// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rollup/proofs.hpp"
#include "rollup/validity.hpp"

namespace rollup {

// Enshrined bridge: the parent-chain contract that escrows deposits, accepts
// rollup state roots (after a fraud window, or against a validity proof),
// and pays out withdrawals proven against accepted roots. It never sees
// rollup state directly -- every judgement is made from commitments,
// openings, and witness replay.

enum class RollupMode : uint8_t { kOptimistic = 0, kZk = 1 };

struct BridgeParams {
    RollupMode mode = RollupMode::kOptimistic;
    NamespaceId ns;
    uint64_t t_fraud = 8; // slots an optimistic claim waits before acceptance
    uint64_t bond = 100;  // stake required of submitters and challengers
    GameConfig game{};    // interactive-dispute shape
};

/// Upper bound on split/pick rounds for a block of `tx_count` transactions
/// under K-ary bisection with step cap 1.
uint64_t game_round_bound(uint64_t tx_count, uint32_t pieces);

/// The fraud window is sound when a watchtower that needs `detect_slots` to
/// spot a lie can still finish an interactive dispute (one round per slot,
/// plus the referee slot) before the claim matures.
bool challenge_window_sound(const BridgeParams& params, uint64_t batch_cap,
                            uint64_t detect_slots);

/// Proof that a specific burn executed inside an accepted claim: the window
/// around the burn is opened and replayed, and must land exactly on the
/// committed window root.
struct WithdrawProof {
    uint64_t rollup_height = 0;
    uint32_t window = 0;           // intermediate-root window holding the burn
    uint32_t offset_in_window = 0; // burn position within the window
    std::optional<IsrWitness> prev_isr; // absent for window 0
    IsrWitness window_isr;
    std::vector<TxWitness> txs; // the full window, in order
    std::vector<SmtWitness> elements;
};

/// Builds the withdrawal proof for tx `local_tx` of an honestly executed
/// block. The tx must be a burn that executed.
WithdrawProof make_withdraw_proof(const ChainView& honest, size_t block_index,
                                  uint64_t local_tx);

struct BridgeEventRecord {
    uint64_t slot = 0;
    std::string kind; // deposit | submit | accept | reject | slash | dispute.* | withdraw
    uint64_t height = 0; // rollup height the event concerns (0 = none)
    std::string detail;
};

struct AcceptedClaim {
    CommittedBlockClaim claim;
    uint64_t accepted_at = 0;
};

class Bridge {
public:
    /// `verifier` is required in kZk mode (token checks); unused otherwise.
    Bridge(BridgeParams params, StateRoot genesis_root,
           const ProvingService* verifier = nullptr);

    // -- funds ---------------------------------------------------------------
    /// Escrows `amount` and returns the mint the sequencer must include.
    /// Mint nonces follow the bridge's own rollup account.
    Transaction deposit(const AccountId& to, uint64_t amount, uint64_t slot);
    uint64_t escrow() const { return escrow_; }

    // -- stake ---------------------------------------------------------------
    void post_bond(const std::string& who, uint64_t amount);
    uint64_t bond_of(const std::string& who) const;
    uint64_t slashed_total() const { return slashed_total_; }

    // -- claims --------------------------------------------------------------
    /// Queues (optimistic) or immediately accepts (zk, with a verifying
    /// proof) the next claim. Enforces height/prev-root chain discipline.
    void submit(const CommittedBlockClaim& claim, const std::string& submitter,
                uint64_t slot, const std::optional<ValidityProof>& proof = {});

    /// Matures pending claims: front of the queue first, never out of order.
    void tick(uint64_t slot);

    /// One-shot refutation. A verifying proof rejects the claim (and every
    /// pending claim built on it) and slashes the submitter; a failing proof
    /// changes nothing. Returns whether the claim fell.
    bool challenge_fraud(uint64_t height, const FraudProof& proof,
                         const std::string& challenger, uint64_t slot);

    /// Interactive dispute. While open, the claim cannot mature.
    void open_dispute(uint64_t height, const std::string& challenger,
                      const StateRoot& challenger_final, uint64_t slot);
    const GameState* dispute_state(uint64_t height) const;
    /// One split/pick round; forfeits resolve the dispute immediately.
    void dispute_move(uint64_t height, const std::optional<SplitMsg>& split,
                      const std::optional<PickMsg>& pick, uint64_t slot);
    /// Terminal adjudication; resolves the dispute.
    GameOutcome dispute_referee(uint64_t height,
                                const std::optional<StepInputs>& challenger_inputs,
                                const std::optional<StepInputs>& defender_inputs,
                                uint64_t slot);

    // -- withdrawals ----------------------------------------------------------
    /// Pays out a burn proven against an accepted claim; returns the amount.
    /// Throws Errc::DoubleWithdrawal on replay, Errc::RejectedProof when the
    /// proof does not check out.
    uint64_t withdraw(const WithdrawProof& proof, uint64_t slot);

    // -- views ---------------------------------------------------------------
    const std::vector<AcceptedClaim>& accepted() const { return accepted_; }
    StateRoot accepted_root() const;
    uint64_t accepted_height() const;
    uint64_t pending_count() const { return pending_.size(); }
    const std::vector<BridgeEventRecord>& events() const { return events_; }
    uint64_t deposited_total() const { return deposited_total_; }
    uint64_t withdrawn_total() const { return withdrawn_total_; }

private:
    struct Dispute {
        GameState game;
        std::string challenger;
    };
    struct Pending {
        CommittedBlockClaim claim;
        std::string submitter;
        uint64_t submitted_at = 0;
        uint64_t earliest_accept = 0;
        std::optional<Dispute> dispute;
    };

    BridgeParams params_;
    StateRoot genesis_root_;
    const ProvingService* verifier_;

    uint64_t escrow_ = 0;
    uint64_t deposited_total_ = 0;
    uint64_t withdrawn_total_ = 0;
    uint64_t mint_nonce_ = 0;
    std::map<std::string, uint64_t> bonds_;
    uint64_t slashed_total_ = 0;

    std::vector<AcceptedClaim> accepted_;
    std::deque<Pending> pending_;
    std::set<Digest> spent_burns_;
    std::vector<BridgeEventRecord> events_;

    Pending& pending_at(uint64_t height);
    void event(uint64_t slot, std::string kind, uint64_t height, std::string detail);
    void slash(const std::string& who, uint64_t slot, const std::string& why);
    void reject_from(uint64_t height, uint64_t slot, const std::string& why);
    void resolve_dispute(uint64_t height, const GameOutcome& outcome, uint64_t slot);
    void require_bonded(const std::string& who) const;
};

} // namespace rollup
