// SPDX-License-Identifier: Apache-2.0
#include "rollup/tournament.hpp"

#include <algorithm>

#include "rollup/error.hpp"
#include "rollup/proofs.hpp"

namespace rollup {

namespace {

using Source = std::pair<uint64_t, uint64_t>; // (parent height, item index)

Source source_of(const LeafReveal& r) {
    return {r.parent_height, r.opening.item_path.index};
}

// Structural check: the leaf extends roots r_before -> r_after. With r_after
// trusted/agreed this alone pins the leaf's content and position.
bool reveal_extends(const LeafReveal& r, const Digest& r_before, const Digest& r_after) {
    const Digest leaf = history_leaf(r.tx, r.post_root);
    return mmr_verify_append(r.peaks_before, leaf, r_before, r_after);
}

// Source check: the tx really sits in the client's finalized parent chain,
// in the rollup namespace, after `prev` in sequencing order.
bool reveal_sourced(const LeafReveal& r, const TournamentContext& ctx,
                    const std::optional<Source>& prev) {
    if (r.parent_height > ctx.head_height) return false;
    auto it = ctx.body_roots.find(r.parent_height);
    if (it == ctx.body_roots.end()) return false;
    if (r.opening.ns != ctx.ns || r.tx.rollup != ctx.ns) return false;
    if (!verify_item_opening(it->second, r.tx.encode(), r.opening)) return false;
    return !prev.has_value() || source_of(r) > *prev;
}

// What the disputed leaf's predecessor establishes for adjudication.
struct PrevContext {
    StateRoot prior_root;
    std::optional<Source> source;
};

// Recovers leaf index-1's content from either party. The agreed root after
// it makes the answer objective; only availability is in question, so both
// sides refusing eliminates both.
std::optional<PrevContext> recover_prev(const HistoryProver& a, const HistoryProver& b,
                                        uint64_t index, const Digest& agreed_after,
                                        const TournamentContext& ctx,
                                        TournamentStats& stats) {
    if (index == 0) return PrevContext{ctx.genesis_root, std::nullopt};
    for (const HistoryProver* p : {&a, &b}) {
        stats.reveals++;
        auto r = p->reveal(index - 1);
        if (!r) continue;
        if (!reveal_extends(*r, r->peaks_before.root(), agreed_after)) continue;
        if (!reveal_sourced(*r, ctx, std::nullopt)) continue;
        return PrevContext{r->post_root, source_of(*r)};
    }
    return std::nullopt;
}

DuelVerdict winner_is(bool a_ok, bool b_ok) {
    if (a_ok && !b_ok) return DuelVerdict::FirstWins;
    if (b_ok && !a_ok) return DuelVerdict::SecondWins;
    return DuelVerdict::BothLose;
}

} // namespace

DuelVerdict adjudicate(const HistoryProver& a, const HistoryProver& b,
                       const TournamentContext& ctx, TournamentStats& stats) {
    const HistoryClaim ca = a.claim();
    const HistoryClaim cb = b.claim();
    if (ca == cb) return DuelVerdict::FirstWins; // same camp; nothing to settle

    // Prefix probe, holding each prover to its own headline claim.
    auto probe = [&stats](const HistoryProver& p, const HistoryClaim& c,
                          uint64_t i) -> std::optional<Digest> {
        stats.prefix_queries++;
        auto r = p.prefix_root(i);
        if (r && i == c.len && *r != c.history_root) return std::nullopt;
        return r;
    };

    const uint64_t min_len = std::min(ca.len, cb.len);
    const Digest empty_root = MmrPeaks{}.root();

    Digest agreed = empty_root;      // prefix root both sides stand behind
    uint64_t agreed_len = 0;
    std::optional<uint64_t> divergence; // smallest prefix length where they differ
    Digest diverged_a, diverged_b;      // their roots at that length

    if (min_len > 0) {
        auto qa = probe(a, ca, min_len);
        auto qb = probe(b, cb, min_len);
        if (!qa || !qb) return winner_is(qb.has_value(), qa.has_value());
        if (*qa != *qb) {
            uint64_t lo = 0, hi = min_len;
            Digest at_hi_a = *qa, at_hi_b = *qb;
            while (hi - lo > 1) {
                const uint64_t mid = lo + (hi - lo) / 2;
                qa = probe(a, ca, mid);
                qb = probe(b, cb, mid);
                if (!qa || !qb) return winner_is(qb.has_value(), qa.has_value());
                if (*qa == *qb) {
                    lo = mid;
                    agreed = *qa;
                    agreed_len = mid;
                } else {
                    hi = mid;
                    at_hi_a = *qa;
                    at_hi_b = *qb;
                }
            }
            divergence = hi;
            diverged_a = at_hi_a;
            diverged_b = at_hi_b;
        } else {
            agreed = *qa;
            agreed_len = min_len;
        }
    }

    if (divergence) {
        // First divergent leaf: index d-1. The agreed root right before it is
        // `agreed` (loop invariant keeps agreed_len == d-1).
        const uint64_t d = *divergence;
        (void)agreed_len;
        auto prev = recover_prev(a, b, d - 1, agreed, ctx, stats);
        if (!prev) return DuelVerdict::BothLose;

        stats.reveals += 2;
        auto ra = a.reveal(d - 1);
        auto rb = b.reveal(d - 1);
        const bool va = ra && reveal_extends(*ra, agreed, diverged_a) &&
                        reveal_sourced(*ra, ctx, prev->source);
        const bool vb = rb && reveal_extends(*rb, agreed, diverged_b) &&
                        reveal_sourced(*rb, ctx, prev->source);
        if (!va || !vb) return winner_is(va, vb);

        // Both leaves are real; sequencing picks the earlier source, and the
        // canonical ledger never skips one.
        const Source sa = source_of(*ra), sb = source_of(*rb);
        if (sa != sb) return sa < sb ? DuelVerdict::FirstWins : DuelVerdict::SecondWins;

        // Same source, same tx: a pure execution dispute over one step.
        if (!(ra->tx == rb->tx)) return DuelVerdict::BothLose; // unreachable if openings bind
        auto step_ok = [&](const HistoryProver& p, const LeafReveal& r) {
            stats.step_queries++;
            auto elements = p.step_elements(d - 1);
            if (!elements) return false;
            const Transaction window[1] = {r.tx};
            auto replayed = replay_window(prev->prior_root, *elements, window);
            return replayed && *replayed == r.post_root;
        };
        return winner_is(step_ok(a, *ra), step_ok(b, *rb));
    }

    if (ca.len != cb.len) {
        // Lengths differ over an agreed prefix: the longer side must show its
        // next leaf is a real, in-order continuation; truncation loses.
        const bool a_longer = ca.len > cb.len;
        const HistoryProver& longer = a_longer ? a : b;
        const HistoryClaim& lc = a_longer ? ca : cb;
        auto after = probe(longer, lc, min_len + 1);
        if (!after) return a_longer ? DuelVerdict::SecondWins : DuelVerdict::FirstWins;

        auto prev = recover_prev(a, b, min_len, agreed, ctx, stats);
        if (!prev) return DuelVerdict::BothLose;

        stats.reveals++;
        auto r = longer.reveal(min_len);
        const bool ok = r && reveal_extends(*r, agreed, *after) &&
                        reveal_sourced(*r, ctx, prev->source);
        if (a_longer) return ok ? DuelVerdict::FirstWins : DuelVerdict::SecondWins;
        return ok ? DuelVerdict::SecondWins : DuelVerdict::FirstWins;
    }

    // Same length, same history; only the headline state root differs. The
    // last leaf (or genesis) decides objectively.
    StateRoot truth = ctx.genesis_root;
    if (min_len > 0) {
        std::optional<StateRoot> post;
        for (const HistoryProver* p : {&a, &b}) {
            stats.reveals++;
            auto r = p->reveal(min_len - 1);
            if (r && reveal_extends(*r, r->peaks_before.root(), agreed)) {
                post = r->post_root;
                break;
            }
        }
        if (!post) return DuelVerdict::BothLose;
        truth = *post;
    }
    return winner_is(ca.state_root == truth, cb.state_root == truth);
}

TournamentResult run_tournament(const std::vector<const HistoryProver*>& provers,
                                const TournamentContext& ctx, uint64_t seed) {
    if (provers.empty())
        throw Error(Errc::NoProverAvailable, "no history provers responded");

    // Camps: provers with identical claims act as one player.
    std::vector<std::pair<HistoryClaim, const HistoryProver*>> camps;
    for (const HistoryProver* p : provers) {
        const HistoryClaim c = p->claim();
        bool found = false;
        for (auto& [claim, _] : camps)
            if (claim == c) {
                found = true;
                break;
            }
        if (!found) camps.emplace_back(c, p);
    }

    TournamentStats stats;
    DetRng rng = DetRng::derive(seed, "tournament.pairing");
    std::vector<size_t> alive(camps.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = i;

    while (alive.size() > 1) {
        rng.shuffle(alive);
        std::vector<size_t> next;
        for (size_t i = 0; i + 1 < alive.size(); i += 2) {
            stats.games++;
            switch (adjudicate(*camps[alive[i]].second, *camps[alive[i + 1]].second,
                               ctx, stats)) {
            case DuelVerdict::FirstWins: next.push_back(alive[i]); break;
            case DuelVerdict::SecondWins: next.push_back(alive[i + 1]); break;
            case DuelVerdict::BothLose: break;
            }
        }
        if (alive.size() % 2 == 1) next.push_back(alive.back()); // bye
        if (next.empty())
            throw Error(Errc::NoProverAvailable, "every prover was eliminated");
        alive = next;
    }

    const auto& [claim, rep] = camps[alive.front()];
    return TournamentResult{claim, rep->id(), stats};
}

// ---------------------------------------------------------------------------
// Honest prover over a local ChainView
// ---------------------------------------------------------------------------

HistoryClaim ChainHistoryProver::claim() const {
    HistoryClaim c;
    c.len = view_->txs.size();
    c.history_root = view_->history.prefix_root(c.len);
    c.state_root =
        c.len == 0 ? state_root(view_->genesis_state) : view_->tx_roots_after.back();
    return c;
}

std::optional<Digest> ChainHistoryProver::prefix_root(uint64_t len) const {
    if (len > view_->txs.size()) return std::nullopt;
    return view_->history.prefix_root(len);
}

std::optional<LeafReveal> ChainHistoryProver::reveal(uint64_t index) const {
    if (index >= view_->txs.size()) return std::nullopt;
    const SourcedTx& st = view_->txs[index];
    auto body = bodies_->find(st.parent_height);
    if (body == bodies_->end()) return std::nullopt;
    LeafReveal r;
    r.tx = st.tx;
    r.post_root = view_->tx_roots_after[index];
    r.peaks_before = view_->history.prefix_peaks(index);
    r.parent_height = st.parent_height;
    r.opening = make_item_opening(body->second, ns_, st.item_index);
    return r;
}

std::optional<std::vector<SmtWitness>> ChainHistoryProver::step_elements(
    uint64_t index) const {
    if (index >= view_->txs.size()) return std::nullopt;
    RollupState before = view_->genesis_state;
    for (uint64_t i = 0; i < index; ++i) before = apply_tx(before, view_->txs[i].tx);
    std::vector<SmtWitness> elements;
    for (const AccountId& id : touched_accounts(view_->txs[index].tx))
        elements.push_back(state_prove(before, id));
    return elements;
}

} // namespace rollup
