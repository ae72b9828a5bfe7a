// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rollup/smt.hpp"
#include "rollup/tx.hpp"

namespace rollup {

using StateRoot = Digest;

// Account-balance machine. Maps never hold zero entries, so equal states
// compare equal structurally and commit to equal roots.
struct RollupState {
    std::map<AccountId, uint64_t> balances;
    std::map<AccountId, uint64_t> nonces;

    AccountRecord record(const AccountId& id) const;
    void set_record(const AccountId& id, const AccountRecord& rec);
    bool operator==(const RollupState&) const = default;
};

struct GasSchedule {
    uint64_t transfer = 10;
    uint64_t mint = 10;
    uint64_t burn = 10;
    uint64_t unknown = 10;
};

/// One transition on bare records: `from` is the sender's record, `to` the
/// recipient's (null when the kind has none). Returns whether the transaction
/// applied; invalid transactions leave the records untouched. Every execution
/// path in the repo (full replay, fraud proofs, referee steps) goes through
/// this single definition.
bool delta_step(uint8_t kind, uint64_t amount, uint64_t nonce, AccountRecord& from,
                AccountRecord* to);

/// True iff the transaction would apply in `state`.
bool tx_valid(const RollupState& state, const Transaction& tx);

/// The transition function: invalid transactions are absorbed (state is
/// returned unchanged), valid ones move balances and bump the sender nonce.
RollupState apply_tx(const RollupState& state, const Transaction& tx);

RollupState apply_ledger(RollupState state, std::span<const Transaction> txs);

/// Charged per transaction regardless of validity.
uint64_t gas_cost(const Transaction& tx, const GasSchedule& schedule = {});

/// Accounts a transaction may read or write; witnesses cover exactly these.
std::vector<AccountId> touched_accounts(const Transaction& tx);

Digest state_root(const RollupState& state);

SmtWitness state_prove(const RollupState& state, const AccountId& id);

} // namespace rollup
