// SPDX-License-Identifier: Apache-2.0
#include "rollup/state.hpp"

namespace rollup {

namespace {

std::map<uint32_t, SmtLeaf> state_leaves(const RollupState& state) {
    std::map<uint32_t, SmtLeaf> leaves;
    auto add = [&](const AccountId& id) {
        AccountRecord rec = state.record(id);
        if (!rec.is_empty()) leaves.emplace(smt_key_index(id), SmtLeaf{id, rec});
    };
    for (const auto& [id, _] : state.balances) add(id);
    for (const auto& [id, _] : state.nonces) add(id);
    return leaves;
}

} // namespace

AccountRecord RollupState::record(const AccountId& id) const {
    AccountRecord rec;
    if (auto it = balances.find(id); it != balances.end()) rec.balance = it->second;
    if (auto it = nonces.find(id); it != nonces.end()) rec.nonce = it->second;
    return rec;
}

void RollupState::set_record(const AccountId& id, const AccountRecord& rec) {
    if (rec.balance == 0)
        balances.erase(id);
    else
        balances[id] = rec.balance;
    if (rec.nonce == 0)
        nonces.erase(id);
    else
        nonces[id] = rec.nonce;
}

bool delta_step(uint8_t kind, uint64_t amount, uint64_t nonce, AccountRecord& from,
                AccountRecord* to) {
    switch (kind) {
    case tx_kind::kTransfer:
        if (to == nullptr || nonce != from.nonce || from.balance < amount) return false;
        if (to != &from && to->balance > UINT64_MAX - amount) return false;
        from.balance -= amount;
        from.nonce += 1;
        to->balance += amount;
        return true;
    case tx_kind::kMint:
        if (to == nullptr || nonce != from.nonce) return false;
        if (to->balance > UINT64_MAX - amount) return false;
        from.nonce += 1;
        to->balance += amount;
        return true;
    case tx_kind::kBurn:
        if (nonce != from.nonce || from.balance < amount) return false;
        from.balance -= amount;
        from.nonce += 1;
        return true;
    default:
        return false; // unknown kind: absorbed
    }
}

bool tx_valid(const RollupState& state, const Transaction& tx) {
    AccountRecord from = state.record(tx.from);
    AccountRecord to = state.record(tx.to);
    AccountRecord* to_ptr = tx.kind == tx_kind::kBurn ? nullptr : &to;
    // Self-payments alias from and to; route through apply_tx's aliasing rule.
    if (tx.from == tx.to && to_ptr != nullptr) to_ptr = &from;
    return delta_step(tx.kind, tx.amount, tx.nonce, from, to_ptr);
}

RollupState apply_tx(const RollupState& state, const Transaction& tx) {
    AccountRecord from = state.record(tx.from);
    AccountRecord to = state.record(tx.to);
    const bool self = tx.from == tx.to;
    AccountRecord* to_ptr = tx.kind == tx_kind::kBurn ? nullptr : (self ? &from : &to);
    if (!delta_step(tx.kind, tx.amount, tx.nonce, from, to_ptr)) return state;
    RollupState next = state;
    next.set_record(tx.from, from);
    if (!self && to_ptr != nullptr) next.set_record(tx.to, to);
    return next;
}

RollupState apply_ledger(RollupState state, std::span<const Transaction> txs) {
    for (const Transaction& tx : txs) state = apply_tx(state, tx);
    return state;
}

uint64_t gas_cost(const Transaction& tx, const GasSchedule& schedule) {
    switch (tx.kind) {
    case tx_kind::kTransfer: return schedule.transfer;
    case tx_kind::kMint: return schedule.mint;
    case tx_kind::kBurn: return schedule.burn;
    default: return schedule.unknown;
    }
}

std::vector<AccountId> touched_accounts(const Transaction& tx) {
    switch (tx.kind) {
    case tx_kind::kTransfer:
    case tx_kind::kMint:
        if (tx.from == tx.to) return {tx.from};
        return {tx.from, tx.to};
    case tx_kind::kBurn:
        return {tx.from};
    default:
        return {};
    }
}

Digest state_root(const RollupState& state) {
    return smt_root(state_leaves(state));
}

SmtWitness state_prove(const RollupState& state, const AccountId& id) {
    return SmtWitness{id, state.record(id), smt_prove(state_leaves(state), id)};
}

} // namespace rollup
