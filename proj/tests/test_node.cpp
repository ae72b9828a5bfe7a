// SPDX-License-Identifier: Apache-2.0
// Rollup node: batching, intermediate roots, ledger extraction, light sync.
#include <doctest.h>

#include "rollup/error.hpp"
#include "rollup/node.hpp"

using namespace rollup;

namespace {

const CodeParams kDa{8, 16, 64};

std::vector<SourcedTx> sample_ledger(size_t n) {
    std::vector<SourcedTx> ledger;
    RollupState st;
    for (size_t i = 0; i < n; ++i) {
        Transaction tx;
        if (i == 0) {
            tx = Transaction{tx_kind::kMint, "bridge", "a", 1000, 0, "roll"};
        } else {
            tx = Transaction{tx_kind::kTransfer, "a", "acct-" + std::to_string(i % 5),
                             (i * 7) % 40, i - 1, "roll"};
        }
        ledger.push_back(SourcedTx{tx, 1 + i / 3, i % 3});
    }
    return ledger;
}

} // namespace

TEST_CASE("isr cadence arithmetic") {
    CHECK(isr_count_for(5, 2) == 3);
    CHECK(isr_count_for(4, 2) == 2);
    CHECK(isr_count_for(1, 1) == 1);
    CHECK(isr_count_for(0, 3) == 0);
    CHECK_THROWS_AS(isr_count_for(4, 0), Error);
}

TEST_CASE("build_rollup_chain: batching, roots, and chaining") {
    auto ledger = sample_ledger(10);
    ChainView view = build_rollup_chain(ledger, {4, 2});
    REQUIRE(view.blocks.size() == 3);
    CHECK(view.blocks[0].txs.size() == 4);
    CHECK(view.blocks[2].txs.size() == 2);

    RollupState replay;
    for (size_t b = 0; b < view.blocks.size(); ++b) {
        const RollupBlock& block = view.blocks[b];
        CHECK(block.height == b + 1);
        CHECK(block.prev_state_root == state_root(view.state_before(b)));
        CHECK(block.isr_count() == isr_count_for(block.txs.size(), block.isr_interval));
        // Replay and check every intermediate root.
        size_t isr_at = 0;
        for (size_t i = 0; i < block.txs.size(); ++i) {
            replay = apply_tx(replay, block.txs[i]);
            const bool at_interval =
                (i + 1) % block.isr_interval == 0 || i + 1 == block.txs.size();
            if (at_interval) {
                CHECK(block.isrs.at(isr_at) == state_root(replay));
                ++isr_at;
            }
        }
        CHECK(block.state_root == block.isrs.back());
        CHECK(state_root(view.post_states[b]) == block.state_root);
    }
    CHECK(view.head_state == view.post_states.back());
    CHECK(view.history.size() == ledger.size());
}

TEST_CASE("tx_root opens both transactions and intermediate roots") {
    auto ledger = sample_ledger(5);
    ChainView view = build_rollup_chain(ledger, {5, 2});
    const RollupBlock& block = view.blocks[0];
    const Digest root = block.tx_root();
    const uint64_t leaf_count = block.txs.size() + block.isr_count();

    for (uint64_t i = 0; i < block.txs.size(); ++i) {
        auto path = prove_tx(block, i);
        CHECK(path.leaf_count == leaf_count);
        CHECK(merkle_verify(root, rb_tx_leaf(block.txs[i]), path));
        // A tx leaf cannot be passed off as an isr leaf.
        CHECK_FALSE(merkle_verify(root, rb_isr_leaf(block.isrs[0]), path));
    }
    for (uint32_t j = 0; j < block.isr_count(); ++j) {
        auto path = prove_isr(block, j);
        CHECK(path.index == block.txs.size() + j);
        CHECK(merkle_verify(root, rb_isr_leaf(block.isrs[j]), path));
    }
}

TEST_CASE("claim_of carries exactly the on-chain commitment") {
    auto view = build_rollup_chain(sample_ledger(4), {4, 1});
    const RollupBlock& block = view.blocks[0];
    CommittedBlockClaim claim = claim_of(block);
    CHECK(claim.tx_count == 4);
    CHECK(claim.tx_root == block.tx_root());
    CHECK(claim.state_root == block.state_root);
    CHECK(claim.prev_state_root == block.prev_state_root);
    // Encoding is injective enough to key registries by hash.
    auto other = claim;
    other.tx_count = 5;
    CHECK(other.hash() != claim.hash());
}

TEST_CASE("history MMR: equal ledgers agree, divergent ledgers split at the fork") {
    auto ledger_a = sample_ledger(9);
    auto ledger_b = ledger_a;
    ledger_b[6].tx.amount += 1; // fork at tx 6

    ChainView a = build_rollup_chain(ledger_a, {3, 1});
    ChainView b = build_rollup_chain(ledger_b, {3, 1});
    CHECK(a.history.root() != b.history.root());
    for (uint64_t i = 0; i <= 6; ++i)
        CHECK(a.history.prefix_root(i) == b.history.prefix_root(i));
    for (uint64_t i = 7; i <= 9; ++i)
        CHECK(a.history.prefix_root(i) != b.history.prefix_root(i));
}

TEST_CASE("extract_rollup_ledger: consumable prefix with availability gating") {
    Transaction t1{tx_kind::kMint, "bridge", "a", 10, 0, "roll"};
    Transaction t2{tx_kind::kTransfer, "a", "b", 3, 0, "roll"};
    Transaction foreign{tx_kind::kTransfer, "x", "y", 1, 0, "other-roll"};

    auto entry = [&](uint64_t height, std::vector<Bytes> items) {
        ParentViewEntry e;
        e.header.height = height;
        e.finalized = true;
        e.available = true;
        e.rollup_items = std::move(items);
        return e;
    };

    std::vector<ParentViewEntry> view = {
        entry(1, {t1.encode(), foreign.encode()}),
        entry(2, {t2.encode()}),
    };

    auto ledger = extract_rollup_ledger(view, "roll", true);
    REQUIRE(ledger.size() == 2); // foreign tx skipped
    CHECK(ledger[0].tx == t1);
    CHECK(ledger[0].parent_height == 1);
    CHECK(ledger[1].tx == t2);

    SUBCASE("unavailable block stops the prefix when DAS is on") {
        view[0].available = false;
        CHECK(extract_rollup_ledger(view, "roll", true).empty());
        // With DAS off the same view is consumed in full.
        CHECK(extract_rollup_ledger(view, "roll", false).size() == 2);
    }
    SUBCASE("unfinalized or unserved blocks stop the prefix") {
        view[1].finalized = false;
        CHECK(extract_rollup_ledger(view, "roll", true).size() == 1);
        view[1].finalized = true;
        view[1].rollup_items.reset();
        CHECK(extract_rollup_ledger(view, "roll", true).size() == 1);
    }
    SUBCASE("garbage voids the block's contribution but not the chain") {
        view.push_back(entry(3, {to_bytes("garbage"), t2.encode()}));
        view.push_back(entry(4, {t1.encode()}));
        std::string diag;
        auto out = extract_rollup_ledger(view, "roll", true, &diag);
        REQUIRE(out.size() == 3); // blocks 1, 2 and 4 contribute
        CHECK(out[2].parent_height == 4);
        CHECK_FALSE(diag.empty());
    }
}

TEST_CASE("light_sync accepts the available prefix of a valid chain") {
    auto set = ValidatorSet::make(0, {"val-0", "val-1", "val-2", "val-3"}, 1);
    std::map<uint64_t, ValidatorSet> sets = {{0, set}};

    std::vector<BlockHeader> headers;
    std::vector<FinalityCertificate> certs;
    BlockHeader prev = genesis_header();
    for (int i = 0; i < 4; ++i) {
        ParentBody body;
        body.segments["roll"] = {
            Transaction{tx_kind::kMint, "bridge", "a", uint64_t(i), 0, "roll"}.encode()};
        auto block = propose(prev, 0, body, kDa);
        std::vector<Vote> votes;
        for (const auto& [id, key] : set.members)
            votes.push_back(make_vote(id, key, block.header));
        headers.push_back(block.header);
        certs.push_back(finalize(block.header, votes, set));
        prev = block.header;
    }

    std::map<uint64_t, bool> avail = {{1, true}, {2, true}, {3, true}, {4, true}};
    auto res = light_sync(headers, certs, avail, genesis_header().hash(), sets, true);
    CHECK(res.ok);
    CHECK(res.accepted_height == 4);

    avail[3] = false;
    res = light_sync(headers, certs, avail, genesis_header().hash(), sets, true);
    CHECK(res.ok);
    CHECK(res.accepted_height == 2);
    CHECK_FALSE(res.reason.empty());

    // DAS off: availability map is ignored.
    res = light_sync(headers, certs, {}, genesis_header().hash(), sets, false);
    CHECK(res.accepted_height == 4);

    // Malformed chain is rejected outright.
    auto broken = headers;
    broken[2].parent_hash = tagged_hash("junk", {});
    res = light_sync(broken, certs, avail, genesis_header().hash(), sets, true);
    CHECK_FALSE(res.ok);
    CHECK(res.accepted_height == 0);
}
