// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <variant>

#include "rollup/node.hpp"

namespace rollup {

// Optimistic-path disputes over a committed block claim: one-shot fraud
// proofs that refute a single intermediate root, and interactive bisection
// games that narrow a disagreement to one execution window before a referee
// re-executes it. Both replay transactions purely from Merkle witnesses, via
// the same delta_step the full nodes run.

struct TxWitness {
    Transaction tx;
    MerklePath path; // against the claim's tx_root, index = position in block
};

struct IsrWitness {
    StateRoot root;
    MerklePath path; // against the claim's tx_root, index = tx_count + isr index
};

/// Everything needed to check one state transition window from proofs alone:
/// the window's transactions with openings and the touched account records
/// with membership proofs against the window's prior root. Returns the root
/// after the window, or nullopt when any witness fails.
std::optional<StateRoot> replay_window(const StateRoot& prior_root,
                                       const std::vector<SmtWitness>& elements,
                                       std::span<const Transaction> txs);

struct WindowReplay {
    StateRoot post_root;
    std::vector<bool> applied; // per tx: executed, or absorbed as invalid
};

/// replay_window plus a per-transaction effect trace; withdrawal proofs use
/// the trace to show a particular burn really executed.
std::optional<WindowReplay> replay_window_trace(const StateRoot& prior_root,
                                                const std::vector<SmtWitness>& elements,
                                                std::span<const Transaction> txs);

// ---------------------------------------------------------------------------
// One-shot fraud proofs
// ---------------------------------------------------------------------------

struct FraudProof {
    uint64_t rollup_height = 0;
    uint32_t isr_index = 0;              // first wrong intermediate root
    std::optional<IsrWitness> prev_isr;  // absent when isr_index == 0
    IsrWitness bad_isr;                  // the committed root being refuted
    std::vector<TxWitness> txs;          // the window's transactions, in order
    std::vector<SmtWitness> elements;    // records against the window's prior root
};

/// Builds a proof refuting `claimed`, which must share the honest block's
/// transaction list but diverge in some intermediate root or the final root.
/// Throws Errc::NoDivergence when there is nothing to refute.
FraudProof make_fraud_proof(const ChainView& honest, size_t block_index,
                            const RollupBlock& claimed);

/// True iff the proof irrefutably shows the claim commits a wrong root: all
/// openings check out against the claim and honest re-execution of the window
/// contradicts the committed value.
bool verify_fraud_proof(const FraudProof& proof, const CommittedBlockClaim& claim);

// ---------------------------------------------------------------------------
// Bisection games
// ---------------------------------------------------------------------------

enum class GamePlayer : uint8_t { Defender, Challenger }; // defender = submitter

struct GameConfig {
    uint32_t pieces = 2;   // cuts per round (K-ary bisection)
    uint32_t step_cap = 1; // stop when the range is this small; referee replays it
};

struct GameState {
    CommittedBlockClaim claim;
    GameConfig config;
    uint64_t lo = 0, hi = 0; // disputed tx range [lo, hi)
    StateRoot lo_root;       // agreed root before tx lo
    StateRoot defender_hi;   // defender's root after tx hi
    StateRoot challenger_hi; // challenger's root after tx hi
    uint32_t round = 0;
    GamePlayer splitter = GamePlayer::Defender; // roles swap every round

    bool terminal() const { return hi - lo <= config.step_cap; }
    /// Piece boundaries for the current range (strictly increasing).
    std::vector<uint64_t> cut_points() const;
};

/// Opens a dispute over the whole block: [0, tx_count), from the claim's
/// prev_state_root, defender claiming the committed final root.
GameState open_game(const CommittedBlockClaim& claim, const GameConfig& config,
                    const StateRoot& challenger_final);

struct SplitMsg {
    std::vector<StateRoot> interior; // splitter's roots at the interior cut points
};

struct PickMsg {
    uint32_t piece = 0;     // first piece whose end root the picker disputes
    StateRoot own_endpoint; // picker's root for that piece's end
};

struct GameOutcome {
    std::optional<GamePlayer> winner; // nullopt: both endpoint claims were wrong
    bool root_rejected = false;
    bool challenger_slashed = false;
    std::string reason;
};

using StepResult = std::variant<GameState, GameOutcome>;

/// One full round: the splitter cuts, the other side picks. Missing or
/// malformed messages forfeit for their sender. Throws Errc::GameProtocol if
/// called on a terminal game.
StepResult bisection_step(const GameState& game, const std::optional<SplitMsg>& split,
                          const std::optional<PickMsg>& pick);

struct StepInputs {
    std::vector<TxWitness> txs;       // window transactions with openings
    std::vector<SmtWitness> elements; // records against the game's lo_root
};

/// Terminal adjudication: re-executes [lo, hi) from lo_root using the first
/// input set that verifies (challenger's preferred). The party whose endpoint
/// matches wins; if neither matches, the committed root is rejected and the
/// challenger still loses its bond. If no inputs verify, the challenge dies
/// and the defender prevails.
GameOutcome referee_verdict(const GameState& game,
                            const std::optional<StepInputs>& challenger_inputs,
                            const std::optional<StepInputs>& defender_inputs);

/// Window transactions/elements an honest party feeds the referee. Openings
/// come from `claimed` (they must verify against the claim's tx_root, which
/// also covers the claimed intermediate roots); records come from honest
/// execution. `claimed` must share the honest block's transaction list.
StepInputs make_step_inputs(const ChainView& honest, size_t block_index,
                            const RollupBlock& claimed, uint64_t lo, uint64_t hi);

/// Splitter-side honest move for the current game range.
SplitMsg honest_split(const ChainView& honest, size_t block_index, const GameState& game);

/// Picker-side honest move; nullopt when the picker agrees with every
/// endpoint (no honest player ever does against a wrong claim).
std::optional<PickMsg> honest_pick(const ChainView& honest, size_t block_index,
                                   const GameState& game, const SplitMsg& split);

} // namespace rollup
