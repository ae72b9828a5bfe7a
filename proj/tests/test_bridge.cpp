// SPDX-License-Identifier: Apache-2.0
// Enshrined bridge: escrow, claim maturity, fraud and dispute paths, and
// withdrawal proofs, in both optimistic and zk modes.
#include <doctest.h>

#include "rollup/bridge.hpp"
#include "rollup/error.hpp"
#include "rollup/rng.hpp"
#include "test_util.hpp"

using namespace rollup;
using namespace rollup::testutil;

namespace {

BridgeParams opt_params() {
    BridgeParams p;
    p.mode = RollupMode::kOptimistic;
    p.ns = kNs;
    p.t_fraud = 10;
    p.bond = 100;
    return p;
}

// Deposit-funded chain with two executing burns and one absorbed burn.
struct BridgeFixture {
    Bridge bridge;
    ChainView view;
    Transaction burn_bob, burn_alice, burn_dead;

    explicit BridgeFixture(BridgeParams params = opt_params(),
                           const ProvingService* verifier = nullptr)
        : bridge(std::move(params), state_root(RollupState{}), verifier) {
        bridge.post_bond("seq", 100);
        bridge.post_bond("watch", 100);
        std::vector<Transaction> txs;
        txs.push_back(bridge.deposit("alice", 500, 0));
        txs.push_back(bridge.deposit("bob", 300, 0));
        txs.push_back(Transaction{tx_kind::kTransfer, "alice", "bob", 200, 0, kNs});
        burn_bob = Transaction{tx_kind::kBurn, "bob", "", 400, 0, kNs};
        burn_alice = Transaction{tx_kind::kBurn, "alice", "", 50, 1, kNs};
        burn_dead = Transaction{tx_kind::kBurn, "carol", "", 10, 0, kNs}; // no funds
        txs.push_back(burn_bob);
        txs.push_back(burn_alice);
        txs.push_back(burn_dead);
        view = build_rollup_chain(with_sources(txs), {3, 2});
    }

    void submit_all(uint64_t slot) {
        for (const RollupBlock& b : view.blocks)
            bridge.submit(claim_of(b), "seq", slot);
    }
};

} // namespace

TEST_CASE("bridge: deposits mint with the bridge account's nonce sequence") {
    Bridge bridge(opt_params(), state_root(RollupState{}));
    auto m0 = bridge.deposit("a", 10, 0);
    auto m1 = bridge.deposit("b", 20, 1);
    CHECK(m0.kind == tx_kind::kMint);
    CHECK(m0.nonce == 0);
    CHECK(m1.nonce == 1);
    CHECK(m0.rollup == kNs);
    CHECK(bridge.escrow() == 30);

    // The mints execute cleanly in sequence order.
    RollupState st;
    st = apply_tx(st, m0);
    st = apply_tx(st, m1);
    CHECK(st.record("a").balance == 10);
    CHECK(st.record("b").balance == 20);
    CHECK(st.record("bridge").nonce == 2);
}

TEST_CASE("bridge: optimistic claims mature in order after t_fraud") {
    BridgeFixture fx;
    fx.bridge.submit(claim_of(fx.view.blocks[0]), "seq", 5);
    fx.bridge.submit(claim_of(fx.view.blocks[1]), "seq", 7);

    fx.bridge.tick(14);
    CHECK(fx.bridge.accepted_height() == 0); // 5 + 10 = 15 not reached
    fx.bridge.tick(15);
    CHECK(fx.bridge.accepted_height() == 1);
    CHECK(fx.bridge.pending_count() == 1);
    fx.bridge.tick(16);
    CHECK(fx.bridge.accepted_height() == 1); // second matures at 17, not before
    fx.bridge.tick(40);
    CHECK(fx.bridge.accepted_height() == 2);
    REQUIRE(fx.bridge.accepted().size() == 2);
    CHECK(fx.bridge.accepted()[0].claim.rollup_height == 1);
    CHECK(fx.bridge.accepted()[0].accepted_at == 15);
    CHECK(fx.bridge.accepted()[1].accepted_at == 40);
    CHECK(fx.bridge.accepted_root() == fx.view.blocks[1].state_root);
}

TEST_CASE("bridge: chain discipline on submission") {
    BridgeFixture fx;
    const auto c1 = claim_of(fx.view.blocks[0]);
    const auto c2 = claim_of(fx.view.blocks[1]);

    CHECK_THROWS_AS(fx.bridge.submit(c2, "seq", 0), Error); // skips height 1
    fx.bridge.submit(c1, "seq", 0);
    CHECK_THROWS_AS(fx.bridge.submit(c1, "seq", 1), Error); // duplicate height

    auto wrong_prev = c2;
    wrong_prev.prev_state_root = perturb(wrong_prev.prev_state_root, "x");
    CHECK_THROWS_AS(fx.bridge.submit(wrong_prev, "seq", 1), Error);

    CHECK_THROWS_AS(fx.bridge.submit(c2, "nobody", 1), Error); // unbonded
    fx.bridge.submit(c2, "seq", 1);
    CHECK(fx.bridge.pending_count() == 2);

    auto empty = c2;
    empty.rollup_height = 3;
    empty.tx_count = 0;
    CHECK_THROWS_AS(fx.bridge.submit(empty, "seq", 2), Error);
}

TEST_CASE("bridge: a verified fraud proof fells the claim and its children") {
    BridgeFixture fx;
    const RollupBlock bad = corrupt_isrs(fx.view.blocks[1], 0, "bridge.lie");
    fx.bridge.submit(claim_of(fx.view.blocks[0]), "seq", 0);
    fx.bridge.submit(claim_of(bad), "seq", 0);
    // A third claim chained on the lie falls with it.
    RollupBlock next = fx.view.blocks[1];
    next.height = 3;
    next.prev_state_root = bad.state_root;
    next.isrs = {perturb(bad.state_root, "n1"), perturb(bad.state_root, "n2")};
    next.state_root = next.isrs.back();
    fx.bridge.submit(claim_of(next), "seq", 0);

    // An invalid accusation against the honest claim changes nothing.
    FraudProof bogus = make_fraud_proof(fx.view, 1, bad);
    CHECK_FALSE(fx.bridge.challenge_fraud(1, bogus, "watch", 2));
    CHECK(fx.bridge.pending_count() == 3);
    CHECK(fx.bridge.bond_of("seq") == 100);

    CHECK(fx.bridge.challenge_fraud(2, bogus, "watch", 3));
    CHECK(fx.bridge.pending_count() == 1); // heights 2 and 3 both gone
    CHECK(fx.bridge.bond_of("seq") == 0);
    CHECK(fx.bridge.slashed_total() == 100);

    fx.bridge.tick(10);
    CHECK(fx.bridge.accepted_height() == 1); // honest claim unaffected
}

TEST_CASE("bridge: interactive dispute resolves lies and freezes maturity") {
    BridgeFixture fx;
    const RollupBlock& honest1 = fx.view.blocks[0];
    const RollupBlock bad = corrupt_isrs(fx.view.blocks[1], 0, "bridge.game");
    fx.bridge.submit(claim_of(honest1), "seq", 0);
    fx.bridge.submit(claim_of(bad), "seq", 0);

    RootOracle truth = view_oracle(fx.view, 1);
    RootOracle lie = corrupt_oracle(truth, 1, "bridge.game");

    fx.bridge.open_dispute(2, "watch", truth(3), 1);
    CHECK_THROWS_AS(fx.bridge.open_dispute(2, "watch", truth(3), 1), Error);

    uint64_t slot = 2;
    while (const GameState* g = fx.bridge.dispute_state(2)) {
        if (g->terminal()) break;
        const RootOracle& sp = g->splitter == GamePlayer::Defender ? lie : truth;
        const RootOracle& pk = g->splitter == GamePlayer::Defender ? truth : lie;
        SplitMsg split = oracle_split(sp, *g);
        auto pick = oracle_pick(pk, *g, split);
        fx.bridge.dispute_move(2, split, pick, slot++);
    }
    const GameState* g = fx.bridge.dispute_state(2);
    REQUIRE(g != nullptr);
    // Maturity is frozen while the dispute runs.
    fx.bridge.tick(1000);
    CHECK(fx.bridge.accepted_height() == 1);

    auto inputs = make_step_inputs(fx.view, 1, bad, g->lo, g->hi);
    GameOutcome out = fx.bridge.dispute_referee(2, inputs, std::nullopt, slot);
    CHECK(out.root_rejected);
    CHECK(fx.bridge.pending_count() == 0);
    CHECK(fx.bridge.bond_of("seq") == 0);
    CHECK(fx.bridge.bond_of("watch") == 100);
}

TEST_CASE("bridge: a failed challenge slashes the challenger, claim matures") {
    BridgeFixture fx;
    fx.bridge.submit(claim_of(fx.view.blocks[0]), "seq", 0);

    RootOracle truth = view_oracle(fx.view, 0);
    RootOracle lie = corrupt_oracle(truth, 1, "sore.loser");
    fx.bridge.open_dispute(1, "watch", lie(3), 1);

    uint64_t slot = 2;
    while (const GameState* g = fx.bridge.dispute_state(1)) {
        if (g->terminal()) break;
        const RootOracle& sp = g->splitter == GamePlayer::Defender ? truth : lie;
        const RootOracle& pk = g->splitter == GamePlayer::Defender ? lie : truth;
        fx.bridge.dispute_move(1, oracle_split(sp, *g),
                               oracle_pick(pk, *g, oracle_split(sp, *g)), slot++);
    }
    const GameState* g = fx.bridge.dispute_state(1);
    auto inputs = make_step_inputs(fx.view, 0, fx.view.blocks[0], g->lo, g->hi);
    GameOutcome out = fx.bridge.dispute_referee(1, std::nullopt, inputs, slot);
    CHECK(out.winner == GamePlayer::Defender);
    CHECK(fx.bridge.bond_of("watch") == 0);
    CHECK(fx.bridge.bond_of("seq") == 100);

    fx.bridge.tick(slot + 20);
    CHECK(fx.bridge.accepted_height() == 1); // survives and matures
}

TEST_CASE("bridge: withdrawals pay exactly the proven executed burns") {
    BridgeFixture fx;
    fx.submit_all(0);
    fx.bridge.tick(10);
    REQUIRE(fx.bridge.accepted_height() == 2);
    CHECK(fx.bridge.escrow() == 800);

    // burn_bob (400) and burn_alice (50) executed in block 2.
    auto wp_bob = make_withdraw_proof(fx.view, 1, 0);
    auto wp_alice = make_withdraw_proof(fx.view, 1, 1);
    CHECK(fx.bridge.withdraw(wp_bob, 11) == 400);
    CHECK(fx.bridge.withdraw(wp_alice, 11) == 50);
    CHECK(fx.bridge.escrow() == 350);
    CHECK(fx.bridge.deposited_total() - fx.bridge.withdrawn_total() ==
          fx.bridge.escrow());

    CHECK_THROWS_AS(fx.bridge.withdraw(wp_bob, 12), Error); // double spend

    // The absorbed burn (carol, no funds) opens fine but is provably a no-op.
    auto wp_dead = make_withdraw_proof(fx.view, 1, 2);
    CHECK_THROWS_AS(fx.bridge.withdraw(wp_dead, 13), Error);
}

TEST_CASE("bridge: withdrawal proof abuse is rejected") {
    BridgeFixture fx;
    fx.submit_all(0);
    fx.bridge.tick(10);
    auto wp = make_withdraw_proof(fx.view, 1, 0);

    SUBCASE("unaccepted height") {
        auto bad = wp;
        bad.rollup_height = 9;
        CHECK_THROWS_AS(fx.bridge.withdraw(bad, 11), Error);
    }
    SUBCASE("tampered window root") {
        auto bad = wp;
        bad.window_isr.root = perturb(bad.window_isr.root, "t");
        CHECK_THROWS_AS(fx.bridge.withdraw(bad, 11), Error);
    }
    SUBCASE("offset out of range") {
        auto bad = wp;
        bad.offset_in_window = 7;
        CHECK_THROWS_AS(fx.bridge.withdraw(bad, 11), Error);
    }
    SUBCASE("target is not a burn") {
        // Hand-built proof for block 1's first window, whose txs are mints.
        const RollupBlock& b1 = fx.view.blocks[0];
        WithdrawProof np;
        np.rollup_height = 1;
        np.window = 0;
        np.offset_in_window = 0;
        np.window_isr = IsrWitness{b1.isrs[0], prove_isr(b1, 0)};
        for (uint64_t i = 0; i < 2; ++i)
            np.txs.push_back(TxWitness{b1.txs[i], prove_tx(b1, i)});
        RollupState genesis;
        std::set<AccountId> seen;
        for (uint64_t i = 0; i < 2; ++i)
            for (const auto& id : touched_accounts(b1.txs[i]))
                if (seen.insert(id).second)
                    np.elements.push_back(state_prove(genesis, id));
        CHECK_THROWS_AS(fx.bridge.withdraw(np, 11), Error);
    }
    SUBCASE("missing element witnesses") {
        auto bad = wp;
        bad.elements.clear();
        CHECK_THROWS_AS(fx.bridge.withdraw(bad, 11), Error);
    }
}

TEST_CASE("bridge: zk mode accepts only proven claims, immediately") {
    ProvingService service(99);
    BridgeParams p = opt_params();
    p.mode = RollupMode::kZk;
    BridgeFixture fx(p, &service);

    const RollupBlock& b1 = fx.view.blocks[0];
    const auto c1 = claim_of(b1);
    CHECK_THROWS_AS(fx.bridge.submit(c1, "seq", 3), Error); // no proof

    auto proof = service.prove_block(RollupState{}, b1.txs, c1);
    REQUIRE(proof.has_value());
    fx.bridge.submit(c1, "seq", 3, proof);
    CHECK(fx.bridge.accepted_height() == 1);
    CHECK(fx.bridge.accepted().front().accepted_at == 3); // no waiting period

    // A lying claim cannot be proven, and a forged token fails verification.
    RollupBlock bad = corrupt_isrs(fx.view.blocks[1], 0, "zk.lie");
    const auto c2 = claim_of(bad);
    CHECK_FALSE(service.prove_block(fx.view.post_states[0], bad.txs, c2).has_value());
    ValidityProof forged{ProofMode::kIdeal, c2, perturb(Digest{}, "forge")};
    CHECK_THROWS_AS(fx.bridge.submit(c2, "seq", 4, forged), Error);

    // No fraud window to invoke in zk mode.
    FraudProof fp = make_fraud_proof(fx.view, 1, bad);
    CHECK_THROWS_AS(fx.bridge.challenge_fraud(1, fp, "watch", 5), Error);

    // Honest second claim with its proof; withdrawal then works as usual.
    const auto honest2 = claim_of(fx.view.blocks[1]);
    fx.bridge.submit(honest2, "seq", 6,
                     service.prove_block(fx.view.post_states[0],
                                         fx.view.blocks[1].txs, honest2));
    CHECK(fx.bridge.withdraw(make_withdraw_proof(fx.view, 1, 0), 7) == 400);
}

TEST_CASE("bridge: fraud window covers detection plus a full dispute") {
    BridgeParams p = opt_params();
    p.game.pieces = 2;

    CHECK(game_round_bound(64, 2) == 6);
    CHECK(game_round_bound(64, 4) == 3);
    CHECK(game_round_bound(64, 8) == 2);
    CHECK(game_round_bound(1, 2) == 0);

    // batch cap 3 (fixture blocks): 2 rounds; detection margin 2.
    p.t_fraud = 2 + 2 + 2; // sound: > detect + rounds + 1
    CHECK(challenge_window_sound(p, 3, 2));
    p.t_fraud = 5;
    CHECK_FALSE(challenge_window_sound(p, 3, 2));

    // Sound window: the watcher detects at +2, disputes one move per slot,
    // and the lie never matures.
    {
        BridgeParams sound = opt_params();
        sound.t_fraud = 6;
        REQUIRE(challenge_window_sound(sound, 3, 2));
        BridgeFixture fx(sound);
        const RollupBlock bad = corrupt_isrs(fx.view.blocks[0], 0, "window");
        fx.bridge.submit(claim_of(bad), "seq", 0);

        RootOracle truth = view_oracle(fx.view, 0);
        RootOracle lie = corrupt_oracle(truth, 1, "window");
        uint64_t slot = 2; // detection margin spent
        fx.bridge.open_dispute(1, "watch", truth(3), slot);
        while (const GameState* g = fx.bridge.dispute_state(1)) {
            if (g->terminal()) break;
            fx.bridge.tick(slot);
            SplitMsg split = oracle_split(lie, *g);
            fx.bridge.dispute_move(1, split, oracle_pick(truth, *g, split), ++slot);
        }
        const GameState* g = fx.bridge.dispute_state(1);
        auto inputs = make_step_inputs(fx.view, 0, bad, g->lo, g->hi);
        fx.bridge.dispute_referee(1, inputs, std::nullopt, ++slot);
        CHECK(slot < sound.t_fraud); // resolved inside the window
        fx.bridge.tick(1000);
        CHECK(fx.bridge.accepted_height() == 0); // the lie is gone
    }
    // Unsound window: the lie matures before the watcher could finish.
    {
        BridgeParams unsound = opt_params();
        unsound.t_fraud = 2;
        REQUIRE_FALSE(challenge_window_sound(unsound, 3, 2));
        BridgeFixture fx(unsound);
        const RollupBlock bad = corrupt_isrs(fx.view.blocks[0], 0, "window2");
        fx.bridge.submit(claim_of(bad), "seq", 0);
        fx.bridge.tick(2); // watcher only detects now -- too late
        CHECK(fx.bridge.accepted_height() == 1);
        CHECK(fx.bridge.accepted_root() == bad.state_root);
    }
}

TEST_CASE("bridge: escrow never pays what was not deposited") {
    BridgeFixture fx;
    fx.submit_all(0);
    fx.bridge.tick(10);
    // A user mints tokens out of thin air on the rollup and burns them; the
    // executed burn opens fine but exceeds what the bridge ever held.
    // (Fixture escrow is 800; an 801 burn cannot exist from deposits alone.)
    std::vector<Transaction> txs;
    txs.push_back(fx.bridge.deposit("dave", 5, 11));
    txs.push_back(Transaction{tx_kind::kMint, "eve", "eve", 10000, 0, kNs});
    txs.push_back(Transaction{tx_kind::kBurn, "eve", "", 900, 1, kNs});
    ChainView cont = build_rollup_chain(with_sources(txs), {3, 1},
                                        fx.view.head_state);
    RollupBlock b3 = cont.blocks[0];
    b3.height = 3;
    fx.bridge.submit(claim_of(b3), "seq", 11);
    fx.bridge.tick(25);
    REQUIRE(fx.bridge.accepted_height() == 3);

    auto wp = make_withdraw_proof(cont, 0, 2);
    wp.rollup_height = 3;
    CHECK_THROWS_AS(fx.bridge.withdraw(wp, 26), Error);
    CHECK(fx.bridge.escrow() == 805);
}
