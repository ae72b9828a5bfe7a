// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "rollup/reed_solomon.hpp"
#include "rollup/tx.hpp"

namespace rollup::sim {

// Scenario description for the discrete-event simulator. Everything a run
// depends on lives here (plus one u64 seed), so (config, seed) fully
// determines the trace byte for byte.

enum class RollupType : uint8_t {
    kEnshrinedOptimistic = 0, // parent-chain bridge, fraud proofs / disputes
    kEnshrinedZk = 1,         // parent-chain bridge, validity proofs
    kSovereignOptimistic = 2, // client-side settlement, history tournaments
    kSovereignZk = 3,         // client-side settlement, recursive proofs
};

std::string to_string(RollupType type);
RollupType rollup_type_from_string(const std::string& name); // throws BadConfig

// Adversary scripts. "target_height" is a parent height for parent-side
// scripts and a rollup height for rollup-side ones.
//
//   none              everyone follows the protocol
//   withhold-restart  a >2/3 coalition finalizes a block while withholding
//                     everything but the rollup segment, the community
//                     restarts from the previous height with a fresh
//                     validator set, and the withheld data surfaces later
//   double-finality   a quorum-overlap coalition double-votes so two
//                     conflicting blocks at one height both gather
//                     certificates
//   das-withhold      a single corrupt proposer withholds chunks of its block
//   bad-root          the root submitter lies once; watchtowers refute it
//   game-liar         like bad-root, but settled by an interactive dispute
//   tournament-liars  lying history provers face the honest one in a
//                     tournament (sovereign-optimistic only)
//   silent-provers    every history prover stonewalls; settlement stalls
inline constexpr const char* kScripts[] = {
    "none",       "withhold-restart", "double-finality",  "das-withhold",
    "bad-root",   "game-liar",        "tournament-liars", "silent-provers",
};

struct DasSection {
    bool enabled = true;
    uint32_t data_chunks = 8;   // k
    uint32_t total_chunks = 16; // n
    uint32_t samples = 9;       // s; >= k makes withholding detection certain
    uint32_t chunk_size = 64;

    CodeParams code() const { return {data_chunks, total_chunks, chunk_size}; }
    bool operator==(const DasSection&) const = default;
};

struct RollupSection {
    RollupType type = RollupType::kEnshrinedOptimistic;
    NamespaceId ns = "roll";
    uint32_t batch_size = 2;   // txs per rollup block
    uint32_t isr_interval = 1; // txs per intermediate state root
    uint64_t t_fraud = 8;      // objection window (optimistic modes)
    uint32_t pieces = 2;       // dispute fan-out
    uint64_t bond = 100;

    bool enshrined() const
    {
        return type == RollupType::kEnshrinedOptimistic || type == RollupType::kEnshrinedZk;
    }
    bool optimistic() const
    {
        return type == RollupType::kEnshrinedOptimistic
            || type == RollupType::kSovereignOptimistic;
    }
    bool operator==(const RollupSection&) const = default;
};

struct AdversarySection {
    std::string script = "none";
    uint64_t target_height = 2; // which height the script strikes at
    uint64_t restart_slot = 14; // withhold-restart: social restart slot
    uint64_t release_slot = 24; // withhold-restart: withheld data surfaces
    uint32_t reveal_chunks = 7; // withholding scripts: chunks still served
    uint32_t liars = 2;         // tournament-liars: field size
    uint64_t liar_from = 4;     // first history leaf the liars corrupt

    bool operator==(const AdversarySection&) const = default;
};

struct WorkloadSection {
    uint32_t tx_count = 16;
    uint32_t accounts = 4;
    uint32_t spacing = 1;       // slots between submissions
    uint64_t deposit = 400;     // per-account funding
    uint64_t burn_amount = 30;  // exit burn appended to the workload

    bool operator==(const WorkloadSection&) const = default;
};

struct ScenarioConfig {
    uint64_t validators = 4;
    uint64_t delta = 1; // network delay bound, slots
    uint64_t slots = 50;
    DasSection das;
    RollupSection rollup;
    AdversarySection adversary;
    WorkloadSection workload;

    /// One parent height per round: propose, +delta votes, +2*delta certificate.
    uint64_t round_slots() const { return 2 * delta; }

    /// Throws Errc::BadConfig with a reason when the scenario is not runnable.
    void validate() const;

    nlohmann::json to_json() const;
    /// Strict parse: unknown keys and type mismatches throw Errc::BadConfig.
    static ScenarioConfig from_json(const nlohmann::json& j);

    bool operator==(const ScenarioConfig&) const = default;
};

} // namespace rollup::sim
