// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollup/parent.hpp"
#include "rollup/state.hpp"

namespace rollup::sim {

// Post-run forensics: decide whether any two honest observers committed to
// conflicting facts, and if so, whom the vote record irrefutably convicts.

struct LedgerSnapshot {
    uint64_t slot = 0;
    std::vector<Digest> tx_hashes; // the ledger prefix this observer held
};

struct ClientLedgerLog {
    std::string client;
    std::vector<LedgerSnapshot> snapshots;
};

// First position where two held prefixes disagree. Deduplicated on
// (index, unordered digest pair): one attack shows up once, no matter how
// many observer pairs or snapshots exhibit it.
struct LedgerViolation {
    uint64_t index = 0;
    Digest a;
    Digest b;
    std::string witness_a; // "client@slot"
    std::string witness_b;
};

std::vector<LedgerViolation> check_ledger_safety(const std::vector<ClientLedgerLog>& logs);

// A state root somebody accepted as settled, keyed by what it settles:
// domain "bridge" indexes by rollup height, domain "history" by tx count.
struct RootAcceptance {
    std::string domain;
    uint64_t index = 0;
    StateRoot root;
    std::string acceptor;
    uint64_t slot = 0;
};

struct StateViolation {
    std::string domain;
    uint64_t index = 0;
    Digest a;
    Digest b;
    std::string witness_a;
    std::string witness_b;
};

std::vector<StateViolation> check_state_safety(const std::vector<RootAcceptance>& accepted);

struct AccountabilityReport {
    std::vector<EquivocationEvidence> guilty; // one entry per convicted validator
    std::vector<ValidatorId> honest_accused;  // must stay empty
    uint32_t floor = 0;                       // ceil(n/3)
    bool accountable = true; // no violation, or guilty >= floor with no honest accused
};

/// Scans the full vote record for double-signing and grades the outcome
/// against the accountability floor.
AccountabilityReport analyze_accountability(bool violated, const std::vector<Vote>& votes,
                                            const std::map<ValidatorId, Digest>& keys,
                                            const std::set<ValidatorId>& honest,
                                            uint32_t floor);

/// Assembles the verdict document the CLI writes and the acceptance suite
/// asserts on. Evidence votes are embedded in full so they can be re-checked
/// offline against the published keys.
nlohmann::json make_verdict(const std::vector<LedgerViolation>& ledger,
                            const std::vector<StateViolation>& state,
                            const AccountabilityReport& report);

/// Re-checks a verdict's evidence against a key map: every guilty entry must
/// carry two verifying, conflicting votes, and no listed honest validator may
/// appear guilty. Returns false with a reason otherwise.
bool verify_verdict_evidence(const nlohmann::json& verdict,
                             const std::map<ValidatorId, Digest>& keys, std::string* reason);

} // namespace rollup::sim
