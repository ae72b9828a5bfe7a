// SPDX-License-Identifier: Apache-2.0
#include "rollup/proofs.hpp"

#include <algorithm>

#include "rollup/error.hpp"

namespace rollup {

namespace {

// Records keyed by account, backed by the witness list order for root
// recomputation.
struct WitnessedRecords {
    std::vector<SmtWitness> witnesses;
    std::map<AccountId, size_t> index_of;
    std::vector<AccountRecord> current;

    bool has(const AccountId& id) const { return index_of.count(id) != 0; }
    AccountRecord* find(const AccountId& id) {
        auto it = index_of.find(id);
        return it == index_of.end() ? nullptr : &current[it->second];
    }
};

// The state root after tx `local_t` of a block (0 = before the first tx).
StateRoot root_at(const ChainView& view, size_t block_index, uint64_t local_t) {
    const RollupBlock& block = view.blocks.at(block_index);
    if (local_t == 0) return block.prev_state_root;
    uint64_t offset = 0;
    for (size_t b = 0; b < block_index; ++b) offset += view.blocks[b].txs.size();
    return view.tx_roots_after.at(offset + local_t - 1);
}

// Window bounds for intermediate root j of a claim.
std::pair<uint64_t, uint64_t> isr_window(const CommittedBlockClaim& claim, uint32_t j) {
    const uint64_t lo = uint64_t{j} * claim.isr_interval;
    const uint64_t hi = std::min<uint64_t>(claim.tx_count, lo + claim.isr_interval);
    return {lo, hi};
}

// Collects element witnesses, in first-touch order, for txs executed from
// `window_start` state.
std::vector<SmtWitness> collect_elements(const RollupState& window_start,
                                         std::span<const Transaction> txs) {
    std::vector<SmtWitness> elements;
    std::set<AccountId> seen;
    for (const Transaction& tx : txs)
        for (const AccountId& id : touched_accounts(tx))
            if (seen.insert(id).second)
                elements.push_back(state_prove(window_start, id));
    return elements;
}

bool check_tx_witnesses(const std::vector<TxWitness>& txs, const CommittedBlockClaim& claim,
                        uint64_t lo, uint64_t hi) {
    if (txs.size() != hi - lo) return false;
    const uint64_t leaf_count = claim.tx_count + isr_count_for(claim.tx_count,
                                                               claim.isr_interval);
    for (size_t i = 0; i < txs.size(); ++i) {
        const MerklePath& path = txs[i].path;
        if (path.index != lo + i || path.leaf_count != leaf_count) return false;
        if (!merkle_verify(claim.tx_root, rb_tx_leaf(txs[i].tx), path)) return false;
    }
    return true;
}

} // namespace

std::optional<WindowReplay> replay_window_trace(const StateRoot& prior_root,
                                                const std::vector<SmtWitness>& elements,
                                                std::span<const Transaction> txs) {
    WitnessedRecords recs;
    recs.witnesses = elements;
    for (size_t i = 0; i < elements.size(); ++i) {
        if (!recs.index_of.emplace(elements[i].key, i).second) return std::nullopt;
        recs.current.push_back(elements[i].record);
    }
    // Membership / consistency: unchanged records must reproduce the root.
    auto same = smt_apply_witnessed(prior_root, recs.witnesses, recs.current);
    if (!same || *same != prior_root) return std::nullopt;

    WindowReplay out;
    for (const Transaction& tx : txs) {
        // Every account the tx may touch needs a witness, even if it turns
        // out invalid -- validity itself depends on the witnessed records.
        for (const AccountId& id : touched_accounts(tx))
            if (!recs.has(id)) return std::nullopt;
        AccountRecord* from = recs.find(tx.from);
        AccountRecord* to = recs.find(tx.to);
        if (from == nullptr) {
            if (!touched_accounts(tx).empty()) return std::nullopt;
            out.applied.push_back(false); // unknown kind: no-op, no witnesses needed
            continue;
        }
        AccountRecord* to_ptr =
            tx.kind == tx_kind::kBurn ? nullptr : (tx.from == tx.to ? from : to);
        // Invalid transactions are absorbed as no-ops.
        out.applied.push_back(delta_step(tx.kind, tx.amount, tx.nonce, *from, to_ptr));
    }
    auto root = smt_apply_witnessed(prior_root, recs.witnesses, recs.current);
    if (!root) return std::nullopt;
    out.post_root = *root;
    return out;
}

std::optional<StateRoot> replay_window(const StateRoot& prior_root,
                                       const std::vector<SmtWitness>& elements,
                                       std::span<const Transaction> txs) {
    auto traced = replay_window_trace(prior_root, elements, txs);
    if (!traced) return std::nullopt;
    return traced->post_root;
}

// ---------------------------------------------------------------------------
// Fraud proofs
// ---------------------------------------------------------------------------

FraudProof make_fraud_proof(const ChainView& honest, size_t block_index,
                            const RollupBlock& claimed) {
    const RollupBlock& truth = honest.blocks.at(block_index);
    if (claimed.txs != truth.txs)
        throw Error(Errc::BadScript,
                    "fraud proofs refute roots over an agreed transaction list");
    if (claimed.isrs.size() != truth.isrs.size() ||
        claimed.isr_interval != truth.isr_interval)
        throw Error(Errc::BadScript, "claim has a malformed intermediate-root layout");

    const uint32_t n_isr = static_cast<uint32_t>(truth.isrs.size());
    uint32_t j = n_isr;
    for (uint32_t i = 0; i < n_isr; ++i) {
        if (claimed.isrs[i] != truth.isrs[i]) {
            j = i;
            break;
        }
    }
    if (j == n_isr) {
        if (claimed.state_root == truth.state_root)
            throw Error(Errc::NoDivergence, "claim matches honest execution");
        j = n_isr - 1; // final root contradicts its own last intermediate root
    }

    FraudProof fp;
    fp.rollup_height = claimed.height;
    fp.isr_index = j;
    if (j > 0) fp.prev_isr = IsrWitness{claimed.isrs[j - 1], prove_isr(claimed, j - 1)};
    fp.bad_isr = IsrWitness{claimed.isrs[j], prove_isr(claimed, j)};

    const auto [lo, hi] = isr_window(claim_of(claimed), j);
    for (uint64_t i = lo; i < hi; ++i)
        fp.txs.push_back(TxWitness{claimed.txs[i], prove_tx(claimed, i)});

    RollupState window_start = honest.state_before(block_index);
    for (uint64_t i = 0; i < lo; ++i)
        window_start = apply_tx(window_start, truth.txs[i]);
    std::span<const Transaction> window(truth.txs.data() + lo, hi - lo);
    fp.elements = collect_elements(window_start, window);
    return fp;
}

bool verify_fraud_proof(const FraudProof& proof, const CommittedBlockClaim& claim) {
    if (proof.rollup_height != claim.rollup_height) return false;
    const uint32_t n_isr = isr_count_for(claim.tx_count, claim.isr_interval);
    if (n_isr == 0 || proof.isr_index >= n_isr) return false;
    const uint64_t leaf_count = claim.tx_count + n_isr;

    // The refuted committed root.
    if (proof.bad_isr.path.index != claim.tx_count + proof.isr_index) return false;
    if (proof.bad_isr.path.leaf_count != leaf_count) return false;
    if (!merkle_verify(claim.tx_root, rb_isr_leaf(proof.bad_isr.root), proof.bad_isr.path))
        return false;

    // The window's prior root: previous intermediate root, or the claim's
    // prev_state_root for the first window.
    StateRoot prior;
    if (proof.isr_index == 0) {
        if (proof.prev_isr.has_value()) return false;
        prior = claim.prev_state_root;
    } else {
        if (!proof.prev_isr.has_value()) return false;
        if (proof.prev_isr->path.index != claim.tx_count + proof.isr_index - 1)
            return false;
        if (proof.prev_isr->path.leaf_count != leaf_count) return false;
        if (!merkle_verify(claim.tx_root, rb_isr_leaf(proof.prev_isr->root),
                           proof.prev_isr->path))
            return false;
        prior = proof.prev_isr->root;
    }

    const auto [lo, hi] = isr_window(claim, proof.isr_index);
    if (!check_tx_witnesses(proof.txs, claim, lo, hi)) return false;

    std::vector<Transaction> window;
    for (const TxWitness& w : proof.txs) window.push_back(w.tx);
    auto replayed = replay_window(prior, proof.elements, window);
    if (!replayed) return false;

    if (*replayed != proof.bad_isr.root) return true;
    // Last window: the claim's headline root must also match the committed
    // final intermediate root.
    return proof.isr_index == n_isr - 1 && claim.state_root != *replayed;
}

// ---------------------------------------------------------------------------
// Bisection games
// ---------------------------------------------------------------------------

std::vector<uint64_t> GameState::cut_points() const {
    const uint64_t len = hi - lo;
    const uint64_t k = std::max<uint64_t>(2, std::min<uint64_t>(config.pieces, len));
    std::vector<uint64_t> cuts;
    for (uint64_t i = 0; i <= k; ++i) cuts.push_back(lo + (len * i) / k);
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

GameState open_game(const CommittedBlockClaim& claim, const GameConfig& config,
                    const StateRoot& challenger_final) {
    if (claim.tx_count == 0)
        throw Error(Errc::BadScript, "cannot dispute an empty block");
    if (config.pieces < 2 || config.step_cap == 0)
        throw Error(Errc::BadConfig, "bisection needs pieces >= 2, step_cap >= 1");
    if (challenger_final == claim.state_root)
        throw Error(Errc::BadScript, "challenger agrees with the committed root");
    GameState game;
    game.claim = claim;
    game.config = config;
    game.lo = 0;
    game.hi = claim.tx_count;
    game.lo_root = claim.prev_state_root;
    game.defender_hi = claim.state_root;
    game.challenger_hi = challenger_final;
    game.splitter = GamePlayer::Defender;
    return game;
}

namespace {

GameOutcome forfeit(GamePlayer offender, const std::string& reason) {
    GameOutcome out;
    out.winner = offender == GamePlayer::Defender ? GamePlayer::Challenger
                                                  : GamePlayer::Defender;
    out.root_rejected = out.winner == GamePlayer::Challenger;
    out.challenger_slashed = out.winner == GamePlayer::Defender;
    out.reason = reason;
    return out;
}

} // namespace

StepResult bisection_step(const GameState& game, const std::optional<SplitMsg>& split,
                          const std::optional<PickMsg>& pick) {
    if (game.terminal())
        throw Error(Errc::GameProtocol, "bisection_step on a terminal game");

    const GamePlayer picker = game.splitter == GamePlayer::Defender
                                  ? GamePlayer::Challenger
                                  : GamePlayer::Defender;
    const auto cuts = game.cut_points();
    const size_t pieces = cuts.size() - 1;

    if (!split.has_value()) return forfeit(game.splitter, "splitter timed out");
    if (split->interior.size() != pieces - 1)
        return forfeit(game.splitter, "malformed split");

    const StateRoot splitter_hi =
        game.splitter == GamePlayer::Defender ? game.defender_hi : game.challenger_hi;
    auto piece_end_root = [&](size_t p) {
        return p + 1 == pieces ? splitter_hi : split->interior[p];
    };

    if (!pick.has_value()) return forfeit(picker, "picker timed out");
    if (pick->piece >= pieces) return forfeit(picker, "pick out of range");
    if (pick->own_endpoint == piece_end_root(pick->piece))
        return forfeit(picker, "pick disputes nothing");

    GameState next = game;
    next.lo = cuts[pick->piece];
    next.hi = cuts[pick->piece + 1];
    next.lo_root = pick->piece == 0 ? game.lo_root : split->interior[pick->piece - 1];
    const StateRoot split_claim = piece_end_root(pick->piece);
    if (game.splitter == GamePlayer::Defender) {
        next.defender_hi = split_claim;
        next.challenger_hi = pick->own_endpoint;
    } else {
        next.challenger_hi = split_claim;
        next.defender_hi = pick->own_endpoint;
    }
    next.round = game.round + 1;
    next.splitter = picker;
    return next;
}

GameOutcome referee_verdict(const GameState& game,
                            const std::optional<StepInputs>& challenger_inputs,
                            const std::optional<StepInputs>& defender_inputs) {
    if (!game.terminal())
        throw Error(Errc::GameProtocol, "referee_verdict on a live game");

    std::optional<StateRoot> replayed;
    for (const auto* inputs : {&challenger_inputs, &defender_inputs}) {
        if (!inputs->has_value()) continue;
        const StepInputs& in = **inputs;
        if (!check_tx_witnesses(in.txs, game.claim, game.lo, game.hi)) continue;
        std::vector<Transaction> window;
        for (const TxWitness& w : in.txs) window.push_back(w.tx);
        replayed = replay_window(game.lo_root, in.elements, window);
        if (replayed) break;
    }

    GameOutcome out;
    if (!replayed) {
        out.winner = GamePlayer::Defender;
        out.challenger_slashed = true;
        out.reason = "no verifying step inputs; challenge dies";
        return out;
    }
    if (*replayed == game.defender_hi) {
        out.winner = GamePlayer::Defender;
        out.challenger_slashed = true;
        out.reason = "re-execution matches the defender";
    } else if (*replayed == game.challenger_hi) {
        out.winner = GamePlayer::Challenger;
        out.root_rejected = true;
        out.reason = "re-execution matches the challenger";
    } else {
        out.winner = std::nullopt;
        out.root_rejected = true;
        out.challenger_slashed = true;
        out.reason = "both endpoint claims contradict re-execution";
    }
    return out;
}

StepInputs make_step_inputs(const ChainView& honest, size_t block_index,
                            const RollupBlock& claimed, uint64_t lo, uint64_t hi) {
    const RollupBlock& truth = honest.blocks.at(block_index);
    if (claimed.txs != truth.txs)
        throw Error(Errc::BadScript,
                    "bisection disputes roots over an agreed transaction list");
    StepInputs inputs;
    for (uint64_t i = lo; i < hi; ++i)
        inputs.txs.push_back(TxWitness{claimed.txs[i], prove_tx(claimed, i)});

    RollupState window_start = honest.state_before(block_index);
    for (uint64_t i = 0; i < lo; ++i)
        window_start = apply_tx(window_start, truth.txs[i]);
    std::span<const Transaction> window(truth.txs.data() + lo, hi - lo);
    inputs.elements = collect_elements(window_start, window);
    return inputs;
}

SplitMsg honest_split(const ChainView& honest, size_t block_index, const GameState& game) {
    SplitMsg msg;
    const auto cuts = game.cut_points();
    for (size_t i = 1; i + 1 < cuts.size(); ++i)
        msg.interior.push_back(root_at(honest, block_index, cuts[i]));
    return msg;
}

std::optional<PickMsg> honest_pick(const ChainView& honest, size_t block_index,
                                   const GameState& game, const SplitMsg& split) {
    const auto cuts = game.cut_points();
    const size_t pieces = cuts.size() - 1;
    if (split.interior.size() != pieces - 1) return std::nullopt;
    const StateRoot splitter_hi = game.splitter == GamePlayer::Defender
                                      ? game.defender_hi
                                      : game.challenger_hi;
    for (size_t p = 0; p < pieces; ++p) {
        const StateRoot claimed =
            p + 1 == pieces ? splitter_hi : split.interior[p];
        const StateRoot truth = root_at(honest, block_index, cuts[p + 1]);
        if (claimed != truth) return PickMsg{static_cast<uint32_t>(p), truth};
    }
    return std::nullopt;
}

} // namespace rollup
