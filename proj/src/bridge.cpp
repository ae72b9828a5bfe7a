// SPDX-License-Identifier: Apache-2.0
#include "rollup/bridge.hpp"

#include <algorithm>

#include "rollup/error.hpp"

namespace rollup {

uint64_t game_round_bound(uint64_t tx_count, uint32_t pieces) {
    if (pieces < 2) throw Error(Errc::BadConfig, "bisection needs pieces >= 2");
    uint64_t rounds = 0, len = tx_count;
    while (len > 1) {
        len = (len + pieces - 1) / pieces; // largest piece after one split
        ++rounds;
    }
    return rounds;
}

bool challenge_window_sound(const BridgeParams& params, uint64_t batch_cap,
                            uint64_t detect_slots) {
    // detect, then one slot per round, then the referee slot, strictly inside
    // the window.
    const uint64_t rounds = game_round_bound(batch_cap, params.game.pieces);
    return params.t_fraud > detect_slots + rounds + 1;
}

WithdrawProof make_withdraw_proof(const ChainView& honest, size_t block_index,
                                  uint64_t local_tx) {
    const RollupBlock& block = honest.blocks.at(block_index);
    if (local_tx >= block.txs.size())
        throw Error(Errc::BadConfig, "tx index outside the block");
    if (block.txs[local_tx].kind != tx_kind::kBurn)
        throw Error(Errc::BadScript, "withdrawals spend burns only");

    WithdrawProof wp;
    wp.rollup_height = block.height;
    wp.window = static_cast<uint32_t>(local_tx / block.isr_interval);
    wp.offset_in_window = static_cast<uint32_t>(local_tx % block.isr_interval);
    if (wp.window > 0)
        wp.prev_isr =
            IsrWitness{block.isrs[wp.window - 1], prove_isr(block, wp.window - 1)};
    wp.window_isr = IsrWitness{block.isrs[wp.window], prove_isr(block, wp.window)};

    const uint64_t lo = uint64_t{wp.window} * block.isr_interval;
    const uint64_t hi = std::min<uint64_t>(block.txs.size(), lo + block.isr_interval);
    for (uint64_t i = lo; i < hi; ++i)
        wp.txs.push_back(TxWitness{block.txs[i], prove_tx(block, i)});

    RollupState at = honest.state_before(block_index);
    for (uint64_t i = 0; i < lo; ++i) at = apply_tx(at, block.txs[i]);
    std::set<AccountId> seen;
    for (uint64_t i = lo; i < hi; ++i)
        for (const AccountId& id : touched_accounts(block.txs[i]))
            if (seen.insert(id).second) wp.elements.push_back(state_prove(at, id));
    return wp;
}

// ---------------------------------------------------------------------------
// Bridge
// ---------------------------------------------------------------------------

Bridge::Bridge(BridgeParams params, StateRoot genesis_root,
               const ProvingService* verifier)
    : params_(std::move(params)), genesis_root_(genesis_root), verifier_(verifier) {
    if (params_.mode == RollupMode::kZk && verifier_ == nullptr)
        throw Error(Errc::BadConfig, "zk bridge needs a proof verifier");
    if (params_.game.pieces < 2 || params_.game.step_cap == 0)
        throw Error(Errc::BadConfig, "bisection needs pieces >= 2, step_cap >= 1");
}

void Bridge::event(uint64_t slot, std::string kind, uint64_t height,
                   std::string detail) {
    events_.push_back({slot, std::move(kind), height, std::move(detail)});
}

Transaction Bridge::deposit(const AccountId& to, uint64_t amount, uint64_t slot) {
    escrow_ += amount;
    deposited_total_ += amount;
    Transaction mint;
    mint.kind = tx_kind::kMint;
    mint.from = "bridge";
    mint.to = to;
    mint.amount = amount;
    mint.nonce = mint_nonce_++;
    mint.rollup = params_.ns;
    event(slot, "deposit", 0, to + "+" + std::to_string(amount));
    return mint;
}

void Bridge::post_bond(const std::string& who, uint64_t amount) {
    bonds_[who] += amount;
}

uint64_t Bridge::bond_of(const std::string& who) const {
    auto it = bonds_.find(who);
    return it == bonds_.end() ? 0 : it->second;
}

void Bridge::require_bonded(const std::string& who) const {
    if (bond_of(who) < params_.bond)
        throw Error(Errc::UnbondedSubmitter, who + " holds no sufficient bond");
}

StateRoot Bridge::accepted_root() const {
    return accepted_.empty() ? genesis_root_ : accepted_.back().claim.state_root;
}

uint64_t Bridge::accepted_height() const {
    return accepted_.empty() ? 0 : accepted_.back().claim.rollup_height;
}

void Bridge::submit(const CommittedBlockClaim& claim, const std::string& submitter,
                    uint64_t slot, const std::optional<ValidityProof>& proof) {
    require_bonded(submitter);
    const uint64_t next_height = accepted_height() + pending_.size() + 1;
    const StateRoot tail_root =
        pending_.empty() ? accepted_root() : pending_.back().claim.state_root;
    if (claim.rollup_height != next_height)
        throw Error(Errc::BadScript, "claim height breaks the chain order");
    if (claim.prev_state_root != tail_root)
        throw Error(Errc::BadScript, "claim does not extend the accepted root");
    if (claim.isr_interval == 0 || claim.tx_count == 0)
        throw Error(Errc::BadScript, "empty or malformed claim");

    if (params_.mode == RollupMode::kZk) {
        if (!proof || !(proof->claim == claim) || !verifier_->verify_block(*proof))
            throw Error(Errc::RejectedProof, "validity proof missing or failing");
        accepted_.push_back({claim, slot});
        event(slot, "submit", claim.rollup_height, submitter);
        event(slot, "accept", claim.rollup_height, "proved");
        return;
    }

    Pending p;
    p.claim = claim;
    p.submitter = submitter;
    p.submitted_at = slot;
    p.earliest_accept = slot + params_.t_fraud;
    pending_.push_back(std::move(p));
    event(slot, "submit", claim.rollup_height, submitter);
}

void Bridge::tick(uint64_t slot) {
    while (!pending_.empty()) {
        Pending& front = pending_.front();
        if (front.dispute.has_value()) break; // frozen until resolved
        if (slot < front.earliest_accept) break;
        accepted_.push_back({front.claim, slot});
        event(slot, "accept", front.claim.rollup_height, "matured");
        pending_.pop_front();
    }
}

Bridge::Pending& Bridge::pending_at(uint64_t height) {
    for (Pending& p : pending_)
        if (p.claim.rollup_height == height) return p;
    throw Error(Errc::WindowClosed, "no pending claim at that height");
}

void Bridge::slash(const std::string& who, uint64_t slot, const std::string& why) {
    const uint64_t taken = std::min(bonds_[who], params_.bond);
    bonds_[who] -= taken;
    slashed_total_ += taken;
    event(slot, "slash", 0, who + ": " + why);
}

void Bridge::reject_from(uint64_t height, uint64_t slot, const std::string& why) {
    // The claim and everything chained on top of it fall together.
    while (!pending_.empty() && pending_.back().claim.rollup_height >= height) {
        event(slot, "reject", pending_.back().claim.rollup_height, why);
        pending_.pop_back();
    }
}

bool Bridge::challenge_fraud(uint64_t height, const FraudProof& proof,
                             const std::string& challenger, uint64_t slot) {
    if (params_.mode != RollupMode::kOptimistic)
        throw Error(Errc::WindowClosed, "zk claims have no fraud window");
    require_bonded(challenger);
    Pending& p = pending_at(height);
    if (!verify_fraud_proof(proof, p.claim)) {
        event(slot, "challenge.fraud", height, "rejected proof from " + challenger);
        return false;
    }
    const std::string submitter = p.submitter;
    event(slot, "challenge.fraud", height, "verified; submitted by " + submitter);
    reject_from(height, slot, "fraud proven");
    slash(submitter, slot, "fraudulent claim " + std::to_string(height));
    return true;
}

void Bridge::open_dispute(uint64_t height, const std::string& challenger,
                          const StateRoot& challenger_final, uint64_t slot) {
    if (params_.mode != RollupMode::kOptimistic)
        throw Error(Errc::WindowClosed, "zk claims have no fraud window");
    require_bonded(challenger);
    Pending& p = pending_at(height);
    if (p.dispute.has_value())
        throw Error(Errc::GameProtocol, "dispute already open at that height");
    p.dispute = Dispute{open_game(p.claim, params_.game, challenger_final), challenger};
    event(slot, "dispute.open", height, challenger);
}

const GameState* Bridge::dispute_state(uint64_t height) const {
    for (const Pending& p : pending_)
        if (p.claim.rollup_height == height && p.dispute)
            return &p.dispute->game;
    return nullptr;
}

void Bridge::resolve_dispute(uint64_t height, const GameOutcome& outcome,
                             uint64_t slot) {
    Pending& p = pending_at(height);
    const std::string challenger = p.dispute->challenger;
    const std::string submitter = p.submitter;
    event(slot, "dispute.outcome", height, outcome.reason);
    if (outcome.challenger_slashed) slash(challenger, slot, "failed challenge");
    if (outcome.root_rejected) {
        reject_from(height, slot, "dispute lost");
        slash(submitter, slot, "indefensible claim " + std::to_string(height));
        return;
    }
    // Claim survives; it may mature once the dispute slot has passed.
    p.dispute.reset();
    p.earliest_accept = std::max(p.earliest_accept, slot + 1);
}

void Bridge::dispute_move(uint64_t height, const std::optional<SplitMsg>& split,
                          const std::optional<PickMsg>& pick, uint64_t slot) {
    Pending& p = pending_at(height);
    if (!p.dispute) throw Error(Errc::GameProtocol, "no dispute at that height");
    StepResult r = bisection_step(p.dispute->game, split, pick);
    if (auto* out = std::get_if<GameOutcome>(&r)) {
        resolve_dispute(height, *out, slot);
        return;
    }
    p.dispute->game = std::get<GameState>(r);
    event(slot, "dispute.move", height,
          "round " + std::to_string(p.dispute->game.round));
}

GameOutcome Bridge::dispute_referee(uint64_t height,
                                    const std::optional<StepInputs>& challenger_inputs,
                                    const std::optional<StepInputs>& defender_inputs,
                                    uint64_t slot) {
    Pending& p = pending_at(height);
    if (!p.dispute) throw Error(Errc::GameProtocol, "no dispute at that height");
    GameOutcome out =
        referee_verdict(p.dispute->game, challenger_inputs, defender_inputs);
    resolve_dispute(height, out, slot);
    return out;
}

uint64_t Bridge::withdraw(const WithdrawProof& wp, uint64_t slot) {
    const AcceptedClaim* found = nullptr;
    for (const AcceptedClaim& a : accepted_)
        if (a.claim.rollup_height == wp.rollup_height) found = &a;
    if (found == nullptr)
        throw Error(Errc::RejectedProof, "no accepted claim at that height");
    const CommittedBlockClaim& claim = found->claim;

    const uint32_t n_isr = isr_count_for(claim.tx_count, claim.isr_interval);
    const uint64_t leaf_count = claim.tx_count + n_isr;
    const uint64_t lo = uint64_t{wp.window} * claim.isr_interval;
    const uint64_t hi = std::min<uint64_t>(claim.tx_count, lo + claim.isr_interval);
    auto fail = [](const char* why) -> uint64_t {
        throw Error(Errc::RejectedProof, why);
    };

    if (wp.window >= n_isr) return fail("window out of range");
    if (wp.offset_in_window >= hi - lo) return fail("offset out of range");
    if (wp.txs.size() != hi - lo) return fail("window size mismatch");

    // Openings against the accepted commitment.
    if (wp.window_isr.path.index != claim.tx_count + wp.window ||
        wp.window_isr.path.leaf_count != leaf_count ||
        !merkle_verify(claim.tx_root, rb_isr_leaf(wp.window_isr.root), wp.window_isr.path))
        return fail("window root fails to open");
    StateRoot prior = claim.prev_state_root;
    if (wp.window == 0) {
        if (wp.prev_isr.has_value()) return fail("unexpected prior window root");
    } else {
        if (!wp.prev_isr.has_value()) return fail("missing prior window root");
        if (wp.prev_isr->path.index != claim.tx_count + wp.window - 1 ||
            wp.prev_isr->path.leaf_count != leaf_count ||
            !merkle_verify(claim.tx_root, rb_isr_leaf(wp.prev_isr->root),
                           wp.prev_isr->path))
            return fail("prior window root fails to open");
        prior = wp.prev_isr->root;
    }
    for (size_t i = 0; i < wp.txs.size(); ++i) {
        const MerklePath& path = wp.txs[i].path;
        if (path.index != lo + i || path.leaf_count != leaf_count ||
            !merkle_verify(claim.tx_root, rb_tx_leaf(wp.txs[i].tx), path))
            return fail("window tx fails to open");
    }

    // Replay must land exactly on the accepted window root.
    std::vector<Transaction> window;
    for (const TxWitness& w : wp.txs) window.push_back(w.tx);
    auto replay = replay_window_trace(prior, wp.elements, window);
    if (!replay || replay->post_root != wp.window_isr.root)
        return fail("window replay contradicts the accepted root");

    const Transaction& burn = window[wp.offset_in_window];
    if (burn.kind != tx_kind::kBurn || burn.rollup != params_.ns)
        return fail("target tx is not a burn for this rollup");
    if (!replay->applied[wp.offset_in_window])
        return fail("burn was absorbed as invalid");

    if (!spent_burns_.insert(burn.hash()).second)
        throw Error(Errc::DoubleWithdrawal, "burn already withdrawn");
    if (burn.amount > escrow_)
        throw Error(Errc::BadScript, "escrow cannot cover the burn");
    escrow_ -= burn.amount;
    withdrawn_total_ += burn.amount;
    event(slot, "withdraw", wp.rollup_height,
          burn.from + "+" + std::to_string(burn.amount));
    return burn.amount;
}

} // namespace rollup
