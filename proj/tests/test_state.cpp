// SPDX-License-Identifier: Apache-2.0
// State machine: transaction codec, transition semantics, state commitments.
#include <doctest.h>

#include <fstream>
#include <map>

#include <json.hpp>

#include "rollup/rng.hpp"
#include "rollup/state.hpp"

using namespace rollup;
using nlohmann::json;

namespace {

Transaction make_tx(uint8_t kind, const AccountId& from, const AccountId& to,
                    uint64_t amount, uint64_t nonce) {
    Transaction tx;
    tx.kind = kind;
    tx.from = from;
    tx.to = to;
    tx.amount = amount;
    tx.nonce = nonce;
    tx.rollup = "roll";
    return tx;
}

RollupState funded_state() {
    RollupState st;
    st.balances = {{"alice", 100}, {"bob", 50}};
    return st;
}

Transaction random_tx(DetRng& rng) {
    static const AccountId ids[] = {"a", "b", "c", "d"};
    Transaction tx;
    tx.kind = static_cast<uint8_t>(rng.below(4)); // includes one unknown kind
    tx.from = ids[rng.below(4)];
    tx.to = ids[rng.below(4)];
    tx.amount = rng.below(60);
    tx.nonce = rng.below(4);
    tx.rollup = "roll";
    return tx;
}

} // namespace

TEST_CASE("transaction codec round trip and hash distinctness") {
    DetRng rng(5);
    std::map<std::string, Transaction> seen;
    for (int i = 0; i < 2000; ++i) {
        Transaction tx = random_tx(rng);
        Transaction back = Transaction::decode(tx.encode());
        CHECK(back == tx);
        auto [it, fresh] = seen.emplace(tx.hash().hex(), tx);
        if (!fresh) CHECK(it->second == tx); // same hash only for same tx
    }
    Bytes garbage = to_bytes("not a transaction");
    CHECK_THROWS_AS(Transaction::decode(garbage), CodecError);
    Bytes padded = make_tx(0, "a", "b", 1, 0).encode();
    padded.push_back(0);
    CHECK_THROWS_AS(Transaction::decode(padded), CodecError);
}

TEST_CASE("valid transfer moves balance and bumps the sender nonce") {
    RollupState st = funded_state();
    RollupState next = apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 30, 0));
    CHECK(next.balances.at("alice") == 70);
    CHECK(next.balances.at("bob") == 80);
    CHECK(next.nonces.at("alice") == 1);
    CHECK(next.nonces.count("bob") == 0);
}

TEST_CASE("invalid transactions are absorbed without any effect") {
    const RollupState st = funded_state();
    // Insufficient balance.
    CHECK(apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 101, 0)) == st);
    // Wrong nonce.
    CHECK(apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 10, 3)) == st);
    // Unknown kind.
    CHECK(apply_tx(st, make_tx(200, "alice", "bob", 10, 0)) == st);
    // Burn more than held.
    CHECK(apply_tx(st, make_tx(tx_kind::kBurn, "bob", "", 51, 0)) == st);
    // Sender with no funds at all.
    CHECK(apply_tx(st, make_tx(tx_kind::kTransfer, "nobody", "bob", 1, 0)) == st);
    for (const auto& tx :
         {make_tx(tx_kind::kTransfer, "alice", "bob", 101, 0), make_tx(200, "a", "b", 1, 0)})
        CHECK_FALSE(tx_valid(st, tx));
}

TEST_CASE("mint and burn adjust total supply; transfers conserve it") {
    RollupState st;
    st = apply_tx(st, make_tx(tx_kind::kMint, "bridge", "alice", 40, 0));
    CHECK(st.balances.at("alice") == 40);
    CHECK(st.nonces.at("bridge") == 1);
    st = apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 15, 0));
    st = apply_tx(st, make_tx(tx_kind::kBurn, "bob", "", 5, 0));
    uint64_t total = 0;
    for (const auto& [_, v] : st.balances) total += v;
    CHECK(total == 35); // 40 minted - 5 burned
    CHECK(st.balances.count("bob") == 1);
    CHECK(st.balances.at("bob") == 10);
}

TEST_CASE("self-transfer leaves the balance and bumps the nonce") {
    RollupState st = funded_state();
    RollupState next = apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "alice", 60, 0));
    CHECK(next.balances.at("alice") == 100);
    CHECK(next.nonces.at("alice") == 1);
}

TEST_CASE("a spent balance leaves a nonzero record behind") {
    RollupState st = funded_state();
    st = apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 100, 0));
    CHECK(st.balances.count("alice") == 0); // zero entries are erased
    CHECK(st.nonces.at("alice") == 1);
    CHECK(st.record("alice") == AccountRecord{0, 1});
    CHECK_FALSE(st.record("alice").is_empty());
}

TEST_CASE("overflow-inducing credits are invalid, not wrapped") {
    RollupState st;
    st.balances = {{"rich", UINT64_MAX - 5}, {"alice", 100}};
    CHECK(apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "rich", 10, 0)) == st);
    CHECK(apply_tx(st, make_tx(tx_kind::kMint, "bridge", "rich", 10, 0)) == st);
}

TEST_CASE("gas is charged per kind regardless of validity") {
    GasSchedule gas;
    CHECK(gas_cost(make_tx(tx_kind::kTransfer, "a", "b", 1, 0), gas) == gas.transfer);
    CHECK(gas_cost(make_tx(tx_kind::kTransfer, "a", "b", 1u << 20, 9), gas) == gas.transfer);
    CHECK(gas_cost(make_tx(77, "a", "b", 1, 0), gas) == gas.unknown);
}

TEST_CASE("apply_ledger is a deterministic left fold") {
    DetRng rng(13);
    Ledger ledger;
    for (int i = 0; i < 200; ++i) ledger.push_back(random_tx(rng));
    RollupState genesis;
    genesis.balances = {{"a", 100}, {"b", 100}};
    RollupState once = apply_ledger(genesis, ledger);
    RollupState twice = apply_ledger(genesis, ledger);
    CHECK(once == twice);
    // Fold property: applying a split ledger in two stages matches.
    RollupState staged = apply_ledger(
        apply_ledger(genesis, std::span(ledger).subspan(0, 100)),
        std::span(ledger).subspan(100));
    CHECK(staged == once);
}

TEST_CASE("state commitment binds the state over random ledgers") {
    DetRng rng(17);
    std::map<std::string, RollupState> by_root;
    for (int round = 0; round < 10000; ++round) {
        RollupState st;
        st.balances = {{"a", 40 + rng.below(20)}, {"b", 40}};
        Ledger ledger;
        const int len = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < len; ++i) ledger.push_back(random_tx(rng));
        st = apply_ledger(st, ledger);
        auto [it, fresh] = by_root.emplace(state_root(st).hex(), st);
        if (!fresh) CHECK(it->second == st);
    }
    CHECK(by_root.size() > 100); // sanity: the corpus actually varies
}

TEST_CASE("state element proofs verify against the root") {
    RollupState st = funded_state();
    st = apply_tx(st, make_tx(tx_kind::kTransfer, "alice", "bob", 30, 0));
    const Digest root = state_root(st);
    for (const AccountId& id : {AccountId("alice"), AccountId("bob"), AccountId("ghost")}) {
        SmtWitness w = state_prove(st, id);
        CHECK(w.record == st.record(id));
        CHECK(smt_verify(root, id, w.record, w.proof));
    }
}

TEST_CASE("state roots match the frozen golden vectors") {
    std::ifstream in(std::string(TEST_VECTOR_DIR) + "/state_vectors.json");
    REQUIRE(in.good());
    json doc = json::parse(in);
    for (const auto& vec : doc.at("vectors")) {
        RollupState st;
        for (const auto& [id, amount] : vec.at("genesis").items())
            st.balances[id] = amount.get<uint64_t>();
        Ledger ledger;
        for (const auto& jtx : vec.at("ledger")) {
            Transaction tx;
            tx.kind = jtx.at("kind").get<uint8_t>();
            tx.from = jtx.at("from").get<std::string>();
            tx.to = jtx.at("to").get<std::string>();
            tx.amount = jtx.at("amount").get<uint64_t>();
            tx.nonce = jtx.at("nonce").get<uint64_t>();
            tx.rollup = jtx.at("rollup").get<std::string>();
            ledger.push_back(tx);
        }
        st = apply_ledger(st, ledger);
        CHECK(state_root(st).hex() == vec.at("root").get<std::string>());
        if (vec.contains("tx_hashes")) {
            const auto& hashes = vec.at("tx_hashes");
            REQUIRE(hashes.size() == ledger.size());
            for (size_t i = 0; i < ledger.size(); ++i)
                CHECK(ledger[i].hash().hex() == hashes[i].get<std::string>());
        }
    }
}
