// SPDX-License-Identifier: Apache-2.0
#include "rollup/sim/config.hpp"

#include <algorithm>
#include <set>

#include "rollup/bridge.hpp"
#include "rollup/error.hpp"

namespace rollup::sim {

using nlohmann::json;

std::string to_string(RollupType type)
{
    switch (type) {
    case RollupType::kEnshrinedOptimistic: return "enshrined-opt";
    case RollupType::kEnshrinedZk: return "enshrined-zk";
    case RollupType::kSovereignOptimistic: return "sovereign-opt";
    case RollupType::kSovereignZk: return "sovereign-zk";
    }
    throw Error(Errc::BadConfig, "unknown rollup type");
}

RollupType rollup_type_from_string(const std::string& name)
{
    for (RollupType t : {RollupType::kEnshrinedOptimistic, RollupType::kEnshrinedZk,
                         RollupType::kSovereignOptimistic, RollupType::kSovereignZk}) {
        if (to_string(t) == name) return t;
    }
    throw Error(Errc::BadConfig, "unknown rollup type: " + name);
}

namespace {

bool known_script(const std::string& s)
{
    return std::any_of(std::begin(kScripts), std::end(kScripts),
                       [&](const char* k) { return s == k; });
}

// Strict field access: every key must exist in the allow list, and typed
// lookups must match. Config mistakes should stop a run, not mutate it.
void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) throw Error(Errc::BadConfig, std::string(where) + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; })
            == allowed.end()) {
            throw Error(Errc::BadConfig, std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(Errc::BadConfig, std::string("bad value for '") + key + "'");
    }
}

} // namespace

void ScenarioConfig::validate() const
{
    auto reject = [](const std::string& why) { throw Error(Errc::BadConfig, why); };

    if (validators < 2) reject("need at least two validators");
    if (delta < 1) reject("delta must be at least one slot");
    if (slots < round_slots() + delta + 1) reject("too few slots for a single round");

    das.code().validate();
    if (das.samples > das.total_chunks) reject("samples exceed total chunks");
    if (das.enabled && das.samples < das.data_chunks)
        reject("scenario sampling needs samples >= data chunks");
    // Eight workload txs plus a foreign blob per block must fit the code.
    if (das.code().capacity() < 480) reject("erasure code capacity under 480 bytes");

    if (rollup.batch_size < 1 || rollup.batch_size > 8) reject("batch_size must be 1..8");
    if (rollup.isr_interval < 1) reject("isr_interval must be positive");
    if (rollup.pieces < 2) reject("dispute fan-out must be at least 2");
    if (rollup.bond == 0) reject("bond must be positive");

    if (workload.tx_count < 1) reject("workload needs at least one tx");
    if (workload.accounts < 2) reject("workload needs at least two accounts");
    if (workload.spacing < 1) reject("spacing must be at least one slot");
    if (workload.deposit == 0) reject("deposit must be positive");
    // Arrivals per round must not exceed the per-block inclusion cap (8).
    if (round_slots() / workload.spacing > 8) reject("workload arrives faster than inclusion");

    const std::string& script = adversary.script;
    if (!known_script(script)) reject("unknown adversary script: " + script);
    if (adversary.target_height < 1) reject("target_height must be at least 1");

    if (script == "withhold-restart") {
        // The coalition (everyone but one honest validator) must reach quorum.
        if (validators < 3) reject("withhold-restart needs >= 3 validators");
        uint64_t r = round_slots();
        if (adversary.restart_slot % r != 0) reject("restart_slot must start a round");
        if (adversary.restart_slot < (adversary.target_height + 1) * r)
            reject("restart_slot precedes the target height's finality");
        if (adversary.release_slot <= adversary.restart_slot)
            reject("release_slot must follow restart_slot");
        if (adversary.release_slot >= slots) reject("release_slot beyond the run");
        if (rollup.batch_size < 2) reject("withhold-restart needs batch_size >= 2");
    }
    if (script == "double-finality") {
        // quorum-overlap coalition plus at least two honest votes to split.
        uint64_t floor = (validators + 2) / 3;
        if (validators - floor < 2) reject("double-finality needs two honest validators");
        if (rollup.batch_size < 2) reject("double-finality needs batch_size >= 2");
    }
    if (script == "withhold-restart" || script == "das-withhold") {
        if (adversary.reveal_chunks >= das.data_chunks)
            reject("reveal_chunks must be below data_chunks to actually withhold");
    }
    if (script == "game-liar" && rollup.type != RollupType::kEnshrinedOptimistic)
        reject("game-liar requires enshrined-opt");
    if ((script == "tournament-liars" || script == "silent-provers")
        && rollup.type != RollupType::kSovereignOptimistic)
        reject(script + " requires sovereign-opt");
    if (script == "tournament-liars" && adversary.liars < 1) reject("need at least one liar");

    if (rollup.optimistic()) {
        BridgeParams bp;
        bp.t_fraud = rollup.t_fraud;
        bp.game = GameConfig{rollup.pieces, 1};
        // Watchtowers see a claim after delta and act one slot later.
        if (!challenge_window_sound(bp, rollup.batch_size, delta + 1))
            reject("t_fraud too small for detection plus a full dispute");
    }
}

json ScenarioConfig::to_json() const
{
    json j;
    j["validators"] = validators;
    j["delta"] = delta;
    j["slots"] = slots;
    j["das"] = {{"enabled", das.enabled},
                {"data_chunks", das.data_chunks},
                {"total_chunks", das.total_chunks},
                {"samples", das.samples},
                {"chunk_size", das.chunk_size}};
    j["rollup"] = {{"type", to_string(rollup.type)}, {"ns", rollup.ns},
                   {"batch_size", rollup.batch_size}, {"isr_interval", rollup.isr_interval},
                   {"t_fraud", rollup.t_fraud},       {"pieces", rollup.pieces},
                   {"bond", rollup.bond}};
    j["adversary"] = {{"script", adversary.script},
                      {"target_height", adversary.target_height},
                      {"restart_slot", adversary.restart_slot},
                      {"release_slot", adversary.release_slot},
                      {"reveal_chunks", adversary.reveal_chunks},
                      {"liars", adversary.liars},
                      {"liar_from", adversary.liar_from}};
    j["workload"] = {{"tx_count", workload.tx_count}, {"accounts", workload.accounts},
                     {"spacing", workload.spacing},   {"deposit", workload.deposit},
                     {"burn_amount", workload.burn_amount}};
    return j;
}

ScenarioConfig ScenarioConfig::from_json(const json& j)
{
    check_keys(j, "config",
               {"validators", "delta", "slots", "das", "rollup", "adversary", "workload"});
    ScenarioConfig cfg;
    cfg.validators = get_or<uint64_t>(j, "validators", cfg.validators);
    cfg.delta = get_or<uint64_t>(j, "delta", cfg.delta);
    cfg.slots = get_or<uint64_t>(j, "slots", cfg.slots);

    if (j.contains("das")) {
        const json& d = j.at("das");
        check_keys(d, "das", {"enabled", "data_chunks", "total_chunks", "samples", "chunk_size"});
        cfg.das.enabled = get_or<bool>(d, "enabled", cfg.das.enabled);
        cfg.das.data_chunks = get_or<uint32_t>(d, "data_chunks", cfg.das.data_chunks);
        cfg.das.total_chunks = get_or<uint32_t>(d, "total_chunks", cfg.das.total_chunks);
        cfg.das.samples = get_or<uint32_t>(d, "samples", cfg.das.samples);
        cfg.das.chunk_size = get_or<uint32_t>(d, "chunk_size", cfg.das.chunk_size);
    }
    if (j.contains("rollup")) {
        const json& r = j.at("rollup");
        check_keys(r, "rollup",
                   {"type", "ns", "batch_size", "isr_interval", "t_fraud", "pieces", "bond"});
        cfg.rollup.type = rollup_type_from_string(
            get_or<std::string>(r, "type", to_string(cfg.rollup.type)));
        cfg.rollup.ns = get_or<std::string>(r, "ns", cfg.rollup.ns);
        cfg.rollup.batch_size = get_or<uint32_t>(r, "batch_size", cfg.rollup.batch_size);
        cfg.rollup.isr_interval = get_or<uint32_t>(r, "isr_interval", cfg.rollup.isr_interval);
        cfg.rollup.t_fraud = get_or<uint64_t>(r, "t_fraud", cfg.rollup.t_fraud);
        cfg.rollup.pieces = get_or<uint32_t>(r, "pieces", cfg.rollup.pieces);
        cfg.rollup.bond = get_or<uint64_t>(r, "bond", cfg.rollup.bond);
    }
    if (j.contains("adversary")) {
        const json& a = j.at("adversary");
        check_keys(a, "adversary",
                   {"script", "target_height", "restart_slot", "release_slot", "reveal_chunks",
                    "liars", "liar_from"});
        cfg.adversary.script = get_or<std::string>(a, "script", cfg.adversary.script);
        cfg.adversary.target_height =
            get_or<uint64_t>(a, "target_height", cfg.adversary.target_height);
        cfg.adversary.restart_slot =
            get_or<uint64_t>(a, "restart_slot", cfg.adversary.restart_slot);
        cfg.adversary.release_slot =
            get_or<uint64_t>(a, "release_slot", cfg.adversary.release_slot);
        cfg.adversary.reveal_chunks =
            get_or<uint32_t>(a, "reveal_chunks", cfg.adversary.reveal_chunks);
        cfg.adversary.liars = get_or<uint32_t>(a, "liars", cfg.adversary.liars);
        cfg.adversary.liar_from = get_or<uint64_t>(a, "liar_from", cfg.adversary.liar_from);
    }
    if (j.contains("workload")) {
        const json& w = j.at("workload");
        check_keys(w, "workload", {"tx_count", "accounts", "spacing", "deposit", "burn_amount"});
        cfg.workload.tx_count = get_or<uint32_t>(w, "tx_count", cfg.workload.tx_count);
        cfg.workload.accounts = get_or<uint32_t>(w, "accounts", cfg.workload.accounts);
        cfg.workload.spacing = get_or<uint32_t>(w, "spacing", cfg.workload.spacing);
        cfg.workload.deposit = get_or<uint64_t>(w, "deposit", cfg.workload.deposit);
        cfg.workload.burn_amount = get_or<uint64_t>(w, "burn_amount", cfg.workload.burn_amount);
    }
    return cfg;
}

} // namespace rollup::sim
