// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rollup/node.hpp"
#include "rollup/rng.hpp"

namespace rollup {

// History tournaments: a client that cannot replay the chain itself asks
// competing provers for their execution history and lets them eliminate each
// other. Histories are per-tx MMRs whose leaves bind (tx bytes, post root),
// so two provers either agree entirely or can be walked, by binary search on
// prefix roots, to one leaf where exactly the dishonest side fails an
// objective check: the leaf must extend the agreed prefix, its transaction
// must be opened from a finalized parent block in source order, and its post
// root must match witnessed re-execution. One honest prover therefore beats
// any number of liars, and all-honest fields settle with zero games.

struct HistoryClaim {
    uint64_t len = 0;      // executed tx count
    Digest history_root;   // MMR root over the len history leaves
    StateRoot state_root;  // claimed final state root

    bool operator==(const HistoryClaim&) const = default;
    auto operator<=>(const HistoryClaim&) const = default;
};

/// One history leaf, opened: enough to check it against agreed prefix roots
/// and against the parent chain. The tx's committed source position is
/// opening.item_path.index at parent_height.
struct LeafReveal {
    Transaction tx;
    StateRoot post_root;
    MmrPeaks peaks_before;    // history MMR peaks before this leaf
    uint64_t parent_height = 0;
    NamespaceOpening opening; // tx bytes against that block's body_root
};

class HistoryProver {
public:
    virtual ~HistoryProver() = default;
    virtual std::string id() const = 0;
    virtual HistoryClaim claim() const = 0;
    /// MMR root over the first `len` leaves; nullopt = refusal (forfeits).
    virtual std::optional<Digest> prefix_root(uint64_t len) const = 0;
    virtual std::optional<LeafReveal> reveal(uint64_t index) const = 0;
    /// Witnesses for the accounts leaf `index`'s tx touches, against the
    /// state root just before it.
    virtual std::optional<std::vector<SmtWitness>> step_elements(uint64_t index) const = 0;
};

/// The client's own trusted context: its accepted parent chain and the
/// rollup's starting point. Reveals may only cite heights in `body_roots`.
struct TournamentContext {
    StateRoot genesis_root;
    NamespaceId ns;
    uint64_t head_height = 0;
    std::map<uint64_t, Digest> body_roots; // finalized body roots by height
};

struct TournamentStats {
    uint64_t games = 0;
    uint64_t prefix_queries = 0;
    uint64_t reveals = 0;
    uint64_t step_queries = 0;
};

enum class DuelVerdict : uint8_t { FirstWins, SecondWins, BothLose };

/// Pairwise adjudication. Objective: an honest prover never loses, whatever
/// the opponent answers (including silence).
DuelVerdict adjudicate(const HistoryProver& a, const HistoryProver& b,
                       const TournamentContext& ctx, TournamentStats& stats);

struct TournamentResult {
    HistoryClaim winner;
    std::string winner_id; // representative of the winning camp
    TournamentStats stats;
};

/// Seeded single-elimination over camps (provers grouped by equal claims).
/// Camps holding identical claims never play each other; a lone camp wins
/// with zero games. Throws Errc::NoProverAvailable when no prover survives.
TournamentResult run_tournament(const std::vector<const HistoryProver*>& provers,
                                const TournamentContext& ctx, uint64_t seed);

/// Honest prover over a locally executed chain. Needs the parent bodies its
/// ledger was extracted from, keyed by height, to produce source openings.
class ChainHistoryProver : public HistoryProver {
public:
    ChainHistoryProver(std::string id, const ChainView* view,
                       const std::map<uint64_t, ParentBody>* bodies, NamespaceId ns)
        : id_(std::move(id)), view_(view), bodies_(bodies), ns_(std::move(ns))
    {
    }

    std::string id() const override { return id_; }
    HistoryClaim claim() const override;
    std::optional<Digest> prefix_root(uint64_t len) const override;
    std::optional<LeafReveal> reveal(uint64_t index) const override;
    std::optional<std::vector<SmtWitness>> step_elements(uint64_t index) const override;

private:
    std::string id_;
    const ChainView* view_;
    const std::map<uint64_t, ParentBody>* bodies_;
    NamespaceId ns_;
};

} // namespace rollup
