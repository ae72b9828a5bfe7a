// SPDX-License-Identifier: Apache-2.0
#include "rollup/sim/forensics.hpp"

#include <algorithm>

#include "rollup/error.hpp"

namespace rollup::sim {

using nlohmann::json;

std::vector<LedgerViolation> check_ledger_safety(const std::vector<ClientLedgerLog>& logs)
{
    // Flatten every held prefix; any two must be consistent (one a prefix of
    // the other), including two snapshots of the same observer over time.
    struct Held {
        const LedgerSnapshot* snap;
        std::string witness;
    };
    std::vector<Held> held;
    for (const ClientLedgerLog& log : logs) {
        for (const LedgerSnapshot& s : log.snapshots) {
            held.push_back({&s, log.client + "@" + std::to_string(s.slot)});
        }
    }

    std::vector<LedgerViolation> out;
    std::set<std::tuple<uint64_t, std::string, std::string>> seen;
    for (size_t i = 0; i < held.size(); ++i) {
        for (size_t j = i + 1; j < held.size(); ++j) {
            const auto& a = held[i].snap->tx_hashes;
            const auto& b = held[j].snap->tx_hashes;
            size_t common = std::min(a.size(), b.size());
            for (size_t k = 0; k < common; ++k) {
                if (a[k] == b[k]) continue;
                std::string lo = a[k].hex(), hi = b[k].hex();
                if (hi < lo) std::swap(lo, hi);
                if (seen.insert({k, lo, hi}).second) {
                    out.push_back({k, a[k], b[k], held[i].witness, held[j].witness});
                }
                break; // only the first divergence between this pair matters
            }
        }
    }
    return out;
}

std::vector<StateViolation> check_state_safety(const std::vector<RootAcceptance>& accepted)
{
    std::map<std::pair<std::string, uint64_t>, std::vector<const RootAcceptance*>> by_key;
    for (const RootAcceptance& r : accepted) by_key[{r.domain, r.index}].push_back(&r);

    std::vector<StateViolation> out;
    std::set<std::tuple<std::string, uint64_t, std::string, std::string>> seen;
    for (const auto& [key, list] : by_key) {
        for (size_t i = 0; i < list.size(); ++i) {
            for (size_t j = i + 1; j < list.size(); ++j) {
                if (list[i]->root == list[j]->root) continue;
                std::string lo = list[i]->root.hex(), hi = list[j]->root.hex();
                if (hi < lo) std::swap(lo, hi);
                if (!seen.insert({key.first, key.second, lo, hi}).second) continue;
                out.push_back({key.first, key.second, list[i]->root, list[j]->root,
                               list[i]->acceptor + "@" + std::to_string(list[i]->slot),
                               list[j]->acceptor + "@" + std::to_string(list[j]->slot)});
            }
        }
    }
    return out;
}

AccountabilityReport analyze_accountability(bool violated, const std::vector<Vote>& votes,
                                            const std::map<ValidatorId, Digest>& keys,
                                            const std::set<ValidatorId>& honest,
                                            uint32_t floor)
{
    AccountabilityReport report;
    report.floor = floor;
    report.guilty = detect_equivocation(votes, keys);
    for (const EquivocationEvidence& ev : report.guilty) {
        if (honest.count(ev.validator)) report.honest_accused.push_back(ev.validator);
    }
    report.accountable = !violated
        || (report.guilty.size() >= floor && report.honest_accused.empty());
    return report;
}

namespace {

json vote_json(const Vote& v)
{
    return {{"voter", v.voter},
            {"epoch", v.epoch},
            {"height", v.height},
            {"block_hash", v.block_hash.hex()},
            {"sig", v.sig.mac.hex()}};
}

Vote vote_from_json(const json& j)
{
    Vote v;
    v.voter = j.at("voter").get<std::string>();
    v.epoch = j.at("epoch").get<uint64_t>();
    v.height = j.at("height").get<uint64_t>();
    v.block_hash = Digest::from_hex(j.at("block_hash").get<std::string>());
    v.sig.mac = Digest::from_hex(j.at("sig").get<std::string>());
    return v;
}

} // namespace

json make_verdict(const std::vector<LedgerViolation>& ledger,
                  const std::vector<StateViolation>& state,
                  const AccountabilityReport& report)
{
    json jl = json::array();
    for (const LedgerViolation& v : ledger) {
        jl.push_back({{"index", v.index},
                      {"a", v.a.hex()},
                      {"b", v.b.hex()},
                      {"witness_a", v.witness_a},
                      {"witness_b", v.witness_b}});
    }
    json js = json::array();
    for (const StateViolation& v : state) {
        js.push_back({{"domain", v.domain},
                      {"index", v.index},
                      {"a", v.a.hex()},
                      {"b", v.b.hex()},
                      {"witness_a", v.witness_a},
                      {"witness_b", v.witness_b}});
    }
    json jg = json::array();
    for (const EquivocationEvidence& ev : report.guilty) {
        jg.push_back({{"validator", ev.validator},
                      {"epoch", ev.vote_a.epoch},
                      {"height", ev.vote_a.height},
                      {"vote_a", vote_json(ev.vote_a)},
                      {"vote_b", vote_json(ev.vote_b)}});
    }
    bool violated = !ledger.empty() || !state.empty();
    json verdict;
    verdict["safety"] = {{"violation", violated}, {"ledger", jl}, {"state", js}};
    verdict["accountability"] = {{"floor", report.floor},
                                 {"guilty", jg},
                                 {"honest_accused", report.honest_accused},
                                 {"accountable", report.accountable}};
    verdict["exit_code"] = violated ? 2 : 0;
    return verdict;
}

bool verify_verdict_evidence(const json& verdict, const std::map<ValidatorId, Digest>& keys,
                             std::string* reason)
{
    auto fail = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    if (!verdict.contains("accountability") || !verdict.contains("safety"))
        return fail("verdict missing sections");
    const json& acc = verdict.at("accountability");
    uint64_t verified = 0;
    try {
        for (const json& entry : acc.at("guilty")) {
            EquivocationEvidence ev;
            ev.validator = entry.at("validator").get<std::string>();
            ev.vote_a = vote_from_json(entry.at("vote_a"));
            ev.vote_b = vote_from_json(entry.at("vote_b"));
            auto key = keys.find(ev.validator);
            if (key == keys.end()) return fail("no key for " + ev.validator);
            if (!verify_equivocation(ev, key->second))
                return fail("evidence for " + ev.validator + " does not verify");
            ++verified;
        }
        if (!acc.at("honest_accused").empty()) return fail("honest validators accused");
        // The accountable flag must follow from the evidence actually carried:
        // a violation is accountable only when the verified guilty set reaches
        // the floor. A verdict honestly reporting an unaccountable violation
        // (empty guilty set, accountable=false) passes; a verdict claiming
        // accountability it cannot evidence does not.
        bool violated = verdict.at("safety").at("violation").get<bool>();
        bool supported = !violated || verified >= acc.at("floor").get<uint64_t>();
        if (acc.at("accountable").get<bool>() != supported)
            return fail("accountable flag unsupported by the carried evidence");
    } catch (const json::exception& e) {
        return fail(std::string("malformed verdict: ") + e.what());
    }
    if (reason) reason->clear();
    return true;
}

} // namespace rollup::sim
