// SPDX-License-Identifier: Apache-2.0
#include "rollup/sim/world.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rollup/bridge.hpp"
#include "rollup/das.hpp"
#include "rollup/error.hpp"
#include "rollup/node.hpp"
#include "rollup/parent.hpp"
#include "rollup/proofs.hpp"
#include "rollup/rng.hpp"
#include "rollup/sim/adversary.hpp"
#include "rollup/sim/forensics.hpp"
#include "rollup/sim/trace.hpp"
#include "rollup/state.hpp"
#include "rollup/tournament.hpp"
#include "rollup/validity.hpp"

namespace rollup::sim {

using nlohmann::json;

namespace {

Digest perturb(const Digest& d, const std::string& tag) { return tagged_hash(tag, d.bytes); }

// State root after `t` txs of a block, per the honest view. t == 0 is the
// block's pre-state.
Digest root_at(const ChainView& view, size_t block_index, uint64_t t)
{
    const RollupBlock& block = view.blocks.at(block_index);
    if (t == 0) return block.prev_state_root;
    size_t offset = 0;
    for (size_t b = 0; b < block_index; ++b) offset += view.blocks[b].txs.size();
    return view.tx_roots_after.at(offset + t - 1);
}

using RootOracle = std::function<Digest(uint64_t)>;

// cut_points() lists every piece boundary, lo and hi included; the split
// message carries roots for the interior boundaries only.
SplitMsg split_by(const GameState& game, const RootOracle& oracle)
{
    SplitMsg msg;
    std::vector<uint64_t> cuts = game.cut_points();
    for (size_t i = 1; i + 1 < cuts.size(); ++i) msg.interior.push_back(oracle(cuts[i]));
    return msg;
}

// Picks the first piece whose end root disagrees with the splitter's value.
std::optional<PickMsg> pick_by(const GameState& game, const SplitMsg& split,
                               const RootOracle& oracle)
{
    std::vector<uint64_t> cuts = game.cut_points();
    size_t pieces = cuts.size() - 1;
    Digest splitter_hi =
        game.splitter == GamePlayer::Defender ? game.defender_hi : game.challenger_hi;
    for (uint32_t piece = 0; piece < pieces; ++piece) {
        Digest splitter_end = piece + 1 < pieces ? split.interior.at(piece) : splitter_hi;
        Digest own = oracle(cuts[piece + 1]);
        if (own != splitter_end) return PickMsg{piece, own};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// World state
// ---------------------------------------------------------------------------

struct TxRecord {
    Transaction tx;
    Digest hash;
    uint64_t submit_slot = 0;
    bool is_burn = false;
    bool announced = false;
    std::optional<uint64_t> included_height;
    std::optional<uint64_t> confirm_slot;
};

struct ProposalCtx {
    ParentBlock block;
    CodedBlock coded;
    RevealPolicy policy;
    bool serve_segment = true;
    std::vector<size_t> included; // workload record indices
    std::string fork;             // "" for the canonical proposal
};

struct FinalEntry {
    ParentBlock block;
    FinalityCertificate cert;
    CodedBlock coded;
    RevealPolicy policy;
    bool serve_segment = true;
    uint64_t final_slot = 0;
    std::vector<size_t> included;
};

struct ClientNode {
    std::string id;
    uint64_t online_from = 0;
    std::vector<ParentViewEntry> view;      // index = height - 1
    std::vector<FinalityCertificate> certs; // parallel to view
    std::vector<Digest> hashes;             // parallel to view, spots rebases
    ClientLedgerLog log;
    std::vector<Digest> last_hashes; // last snapshot, to record only changes
};

class World {
public:
    World(const ScenarioConfig& cfg, uint64_t seed);
    SimResult run();

private:
    // phases
    void materialize_txs(uint64_t slot);
    void restart_if_scheduled(uint64_t slot);
    void cert_phase(uint64_t slot);
    void propose_phase(uint64_t slot);
    void vote_phase(uint64_t slot);
    void pipeline_step(uint64_t slot);
    void bridge_step(uint64_t slot);
    void client_step(ClientNode& client, uint64_t slot);
    void drain_confirms(uint64_t slot);
    void finish_run();

    // helpers
    void gen_workload();
    bool sample_available(const std::string& who, const Digest& commitment,
                          const CodedBlock& coded, const RevealPolicy& policy, uint64_t height,
                          uint64_t slot);
    const FinalEntry& entry_for(const ClientNode& client, size_t index) const;
    void observe_entry(ClientNode& client, const FinalEntry& entry, uint64_t slot);
    void refresh_node0(uint64_t slot);
    void submit_claims(uint64_t slot);
    void sovereign_claims(uint64_t slot);
    void watchtower_step(uint64_t slot);
    void dispute_step(uint64_t slot);
    void drain_bridge_events();
    void schedule_confirm(size_t record, uint64_t slot);
    void confirm_ledger_range(uint64_t from, uint64_t to, uint64_t slot);
    void try_withdraw(size_t record, uint64_t slot);
    RootOracle honest_oracle(size_t block_index) const;
    RootOracle liar_oracle(size_t block_index) const;

    ScenarioConfig cfg_;
    uint64_t seed_;
    TraceWriter trace_;

    // parent chain
    uint64_t epoch_ = 0;
    ValidatorSet set0_, cur_set_;
    std::map<uint64_t, ValidatorSet> sets_by_epoch_;
    std::map<ValidatorId, Digest> all_keys_;
    std::set<ValidatorId> honest_ids_, corrupt_ids_;
    std::vector<Vote> all_votes_;
    std::vector<FinalEntry> branch_;
    std::optional<FinalEntry> conflict_entry_; // double-finality's second block
    uint64_t round_start_ = 0;
    uint64_t round_index_ = 0;
    std::vector<ProposalCtx> proposals_;
    std::map<Digest, std::vector<Vote>> votes_by_block_;
    bool halted_ = false;
    bool attack_done_ = false;
    bool restarted_ = false;

    // workload
    std::vector<TxRecord> records_;
    std::map<Digest, size_t> record_by_hash_;
    std::set<size_t> included_; // records included on the current branch

    // rollup pipeline (single canonical branch scripts only)
    bool pipeline_on_ = false;
    bool bridge_on_ = false;
    std::vector<ParentViewEntry> node0_view_;
    std::map<uint64_t, ParentBody> node0_bodies_;
    std::vector<SourcedTx> node0_ledger_;
    ChainView view_chain_;
    ProvingService prover_;
    std::optional<Bridge> bridge_;
    size_t bridge_events_seen_ = 0;
    uint64_t next_claim_ = 1; // next rollup height the honest submitter owes
    std::optional<RollupBlock> corrupt_block_;
    uint64_t corrupt_claim_slot_ = 0;
    bool corrupt_pending_ = false;
    bool dispute_open_ = false;

    // sovereign settlement
    uint64_t published_len_ = 0;  // history length covered by claims/proofs
    uint64_t confirmed_len_ = 0;  // history length confirmed to clients
    bool settlement_halted_ = false;
    bool tournament_done_ = false;
    RollupState carried_state_;   // sovereign-zk: state at the proven prefix
    MmrPeaks carried_peaks_;      //               and its history peaks
    std::optional<RecursiveValidityProof> carried_proof_;
    struct PendingHistory {
        uint64_t len = 0;
        StateRoot root;
        uint64_t slot = 0;
    };
    std::vector<PendingHistory> pending_history_;

    // observers
    std::vector<ClientNode> clients_;
    std::map<uint64_t, std::vector<size_t>> pending_confirms_;
    std::vector<RootAcceptance> acceptances_;

    // counters
    struct {
        uint64_t failed_rounds = 0, certs = 0, votes = 0, das_samples = 0, claims = 0,
                 fraud_challenges = 0, validity_rejections = 0, withdrawals = 0,
                 dispute_rounds = 0;
        TournamentStats tour;
    } counters_;

    SimResult result_;
};

// ---------------------------------------------------------------------------
// Setup
// ---------------------------------------------------------------------------

std::vector<ValidatorId> make_ids(uint64_t epoch, uint64_t n)
{
    std::vector<ValidatorId> ids;
    for (uint64_t i = 0; i < n; ++i) {
        std::string num = std::to_string(i);
        if (num.size() < 2) num = "0" + num;
        ids.push_back("v" + std::to_string(epoch) + "-" + num);
    }
    return ids;
}

World::World(const ScenarioConfig& cfg, uint64_t seed)
    : cfg_(cfg), seed_(seed), prover_(DetRng::derive(seed, "sim.prover").next())
{
    cfg_.validate();
    result_.config = cfg_;
    result_.seed = seed;

    set0_ = ValidatorSet::make(0, make_ids(0, cfg_.validators),
                               DetRng::derive(seed_, "sim.keys.0").next());
    cur_set_ = set0_;
    sets_by_epoch_[0] = set0_;
    for (const auto& [id, key] : set0_.members) all_keys_[id] = key;

    // Which validators the script corrupts. The target height is first
    // attempted at round (target - 1), so that round's proposer anchors the
    // coalition.
    const std::string& script = cfg_.adversary.script;
    ValidatorId target_proposer = set0_.proposer_at(cfg_.adversary.target_height - 1);
    if (script == "withhold-restart") {
        // Everyone but one honest observer-validator.
        ValidatorId honest;
        for (const auto& [id, _] : set0_.members) {
            if (id != target_proposer) honest = id; // keep the last non-proposer
        }
        for (const auto& [id, _] : set0_.members) {
            if (id != honest) corrupt_ids_.insert(id);
        }
    } else if (script == "double-finality") {
        size_t p0 = 0;
        for (size_t i = 0; i < set0_.members.size(); ++i) {
            if (set0_.members[i].first == target_proposer) p0 = i;
        }
        // The minimal coalition that can hand two blocks a quorum each is the
        // quorum overlap 2q - n: the remaining 2(n - q) honest votes split
        // evenly, and every coalition member must sign both blocks. That
        // overlap is exactly what the evidence later convicts, and it is
        // never below the accountability floor.
        uint64_t overlap = 2 * uint64_t{set0_.quorum()} - set0_.size();
        for (uint64_t i = 0; i < overlap; ++i) {
            corrupt_ids_.insert(set0_.members[(p0 + i) % set0_.members.size()].first);
        }
    } else if (script == "das-withhold") {
        corrupt_ids_.insert(target_proposer);
    }
    for (const auto& [id, _] : set0_.members) {
        if (!corrupt_ids_.count(id)) honest_ids_.insert(id);
    }

    pipeline_on_ = script != "withhold-restart" && script != "double-finality";
    bridge_on_ = pipeline_on_ && cfg_.rollup.enshrined();
    if (bridge_on_) {
        BridgeParams bp;
        bp.mode = cfg_.rollup.type == RollupType::kEnshrinedZk ? RollupMode::kZk
                                                               : RollupMode::kOptimistic;
        bp.ns = cfg_.rollup.ns;
        bp.t_fraud = cfg_.rollup.t_fraud;
        bp.bond = cfg_.rollup.bond;
        bp.game.pieces = cfg_.rollup.pieces;
        bp.game.step_cap = 1;
        bridge_.emplace(bp, state_root(RollupState{}), &prover_);
        bridge_->post_bond("op-submit", cfg_.rollup.bond);
        bridge_->post_bond("op-watch", cfg_.rollup.bond);
        bridge_->post_bond("op-evil", cfg_.rollup.bond);
    }

    clients_.push_back({"client-0", 0, {}, {}, {}, {"client-0", {}}, {}});
    uint64_t late_from = script == "withhold-restart" ? cfg_.adversary.restart_slot + 1 : 0;
    clients_.push_back({"client-1", late_from, {}, {}, {}, {"client-1", {}}, {}});

    gen_workload();
}

// Valid transfers between funded accounts, opened by per-account deposits and
// closed by one exit burn. Validity is by construction (shadow execution), so
// clean runs confirm every transaction and latency accounting stays exact.
void World::gen_workload()
{
    DetRng rng = DetRng::derive(seed_, "sim.workload");
    const WorkloadSection& w = cfg_.workload;
    const std::string minter = bridge_on_ ? "bridge" : "faucet";
    RollupState shadow;
    std::vector<Transaction> txs;

    auto acct = [](uint32_t i) { return "acct-" + std::to_string(i); };
    auto nonce_of = [&](const AccountId& id) {
        auto it = shadow.nonces.find(id);
        return it == shadow.nonces.end() ? 0 : it->second;
    };
    auto balance_of = [&](const AccountId& id) {
        auto it = shadow.balances.find(id);
        return it == shadow.balances.end() ? 0 : it->second;
    };
    auto push = [&](Transaction tx) {
        if (!tx_valid(shadow, tx)) throw Error(Errc::BadScript, "generated an invalid tx");
        shadow = apply_tx(shadow, tx);
        txs.push_back(std::move(tx));
    };

    uint32_t funded = std::min(w.accounts, w.tx_count);
    for (uint32_t i = 0; i < funded; ++i) {
        push({tx_kind::kMint, minter, acct(i), w.deposit, nonce_of(minter), cfg_.rollup.ns});
    }
    while (txs.size() + 1 < w.tx_count) {
        uint32_t from_idx = static_cast<uint32_t>(rng.below(w.accounts));
        AccountId from;
        uint64_t budget = 0;
        for (uint32_t probe = 0; probe < w.accounts; ++probe) {
            uint32_t idx = (from_idx + probe) % w.accounts;
            uint64_t bal = balance_of(acct(idx));
            // Keep the exit burn funded: acct-0 never spends below the burn.
            uint64_t reserve = idx == 0 ? w.burn_amount : 0;
            if (bal > reserve + 1) {
                from = acct(idx);
                budget = bal - reserve;
                from_idx = idx;
                break;
            }
        }
        if (from.empty()) {
            push({tx_kind::kMint, minter, acct(0), w.deposit, nonce_of(minter),
                  cfg_.rollup.ns});
            continue;
        }
        uint32_t to_idx = (from_idx + 1 + static_cast<uint32_t>(rng.below(w.accounts - 1)))
            % w.accounts;
        uint64_t amount = 1 + rng.below(std::max<uint64_t>(1, budget / 2));
        push({tx_kind::kTransfer, from, acct(to_idx), amount, nonce_of(from), cfg_.rollup.ns});
    }
    if (txs.size() < w.tx_count) {
        uint64_t amount = std::min<uint64_t>(w.burn_amount, balance_of(acct(0)));
        if (amount == 0) {
            push({tx_kind::kMint, minter, acct(0), w.deposit, nonce_of(minter),
                  cfg_.rollup.ns});
            amount = w.burn_amount;
        }
        push({tx_kind::kBurn, acct(0), "", amount, nonce_of(acct(0)), cfg_.rollup.ns});
    }

    for (size_t i = 0; i < txs.size(); ++i) {
        TxRecord rec;
        rec.tx = txs[i];
        rec.hash = txs[i].hash();
        rec.submit_slot = uint64_t{i} * w.spacing;
        rec.is_burn = txs[i].kind == tx_kind::kBurn;
        record_by_hash_[rec.hash] = records_.size();
        records_.push_back(std::move(rec));
    }
}

// ---------------------------------------------------------------------------
// Parent-chain phases
// ---------------------------------------------------------------------------

void World::materialize_txs(uint64_t slot)
{
    for (size_t i = 0; i < records_.size(); ++i) {
        TxRecord& rec = records_[i];
        if (rec.announced || rec.submit_slot != slot) continue;
        rec.announced = true;
        if (bridge_on_ && rec.tx.kind == tx_kind::kMint && rec.tx.from == "bridge") {
            Transaction minted = bridge_->deposit(rec.tx.to, rec.tx.amount, slot);
            if (minted.hash() != rec.hash)
                throw Error(Errc::BadScript, "bridge deposit diverged from the workload");
        }
        trace_.event(slot, "tx.submit",
                     {{"tx", rec.hash.hex()}, {"kind", rec.tx.kind}, {"from", rec.tx.from}});
    }
}

void World::restart_if_scheduled(uint64_t slot)
{
    const AdversarySection& adv = cfg_.adversary;
    if (cfg_.adversary.script != "withhold-restart") return;
    if (!restarted_ && slot == adv.restart_slot) {
        restarted_ = true;
        // Social restart: a fresh validator set rebuilds from the height
        // below the withheld block. Votes cast so far stay on the record.
        uint64_t rebase = adv.target_height - 1;
        while (branch_.size() > rebase) {
            for (size_t rec : branch_.back().included) {
                records_[rec].included_height.reset();
                included_.erase(rec);
            }
            branch_.pop_back();
        }
        epoch_ = 1;
        ValidatorSet set1 = ValidatorSet::make(1, make_ids(1, cfg_.validators),
                                               DetRng::derive(seed_, "sim.keys.1").next());
        cur_set_ = set1;
        sets_by_epoch_[1] = set1;
        for (const auto& [id, key] : set1.members) {
            all_keys_[id] = key;
            honest_ids_.insert(id);
        }
        proposals_.clear();
        votes_by_block_.clear();
        round_start_ = slot;
        trace_.event(slot, "restart",
                     {{"epoch", epoch_},
                      {"rebase_height", rebase},
                      {"reason", "community rejects the withheld block"}});
    }
    if (restarted_ && slot == adv.release_slot) {
        // The withheld data surfaces. Nobody re-votes, so the vote record
        // still shows no equivocation; verdicts must cope with that.
        trace_.event(slot, "das.release",
                     {{"height", adv.target_height},
                      {"note", "withheld chunks published after the restart"}});
    }
}

void World::propose_phase(uint64_t slot)
{
    if (halted_ || !proposals_.empty() || slot != round_start_) return;
    uint64_t height = branch_.size() + 1;
    BlockHeader parent = branch_.empty() ? genesis_header() : branch_.back().block.header;
    ValidatorId proposer = cur_set_.proposer_at(round_index_);
    const std::string& script = cfg_.adversary.script;

    // Sequencing: FIFO over announced-but-unincluded workload txs, capped.
    std::vector<size_t> picked;
    for (size_t i = 0; i < records_.size() && picked.size() < 8; ++i) {
        if (records_[i].announced && !included_.count(i)) picked.push_back(i);
    }

    bool strike = !attack_done_ && epoch_ == 0 && height == cfg_.adversary.target_height
        && corrupt_ids_.count(proposer) > 0
        && (script == "withhold-restart" || script == "double-finality"
            || script == "das-withhold");

    auto build = [&](const std::vector<size_t>& order, const std::string& blob_tag,
                     const std::string& fork) {
        ParentBody body;
        body.segments[cfg_.rollup.ns] = {};
        for (size_t rec : order) body.segments[cfg_.rollup.ns].push_back(records_[rec].tx.encode());
        Digest blob = tagged_hash("sim.blob", to_bytes(blob_tag + std::to_string(height)));
        body.segments["data"] = {Bytes(blob.bytes.begin(), blob.bytes.end())};
        ProposalCtx ctx;
        ctx.block = propose(parent, epoch_, body, cfg_.das.code());
        ctx.coded = das_encode(ctx.block.body.encode(), cfg_.das.code());
        ctx.included = order;
        ctx.fork = fork;
        return ctx;
    };

    if (strike && script == "double-finality") {
        // Two conflicting blocks at one height; honest visibility is split.
        proposals_.push_back(build(picked, "a", "a"));
        std::vector<size_t> reversed(picked.rbegin(), picked.rend());
        proposals_.push_back(build(reversed, "b", "b"));
        attack_done_ = true;
    } else if (strike && script == "withhold-restart") {
        // Reorder the batch (the proposer's prerogative) and withhold
        // everything but the rollup segment.
        std::vector<size_t> reversed(picked.rbegin(), picked.rend());
        ProposalCtx ctx = build(reversed, "w", "");
        ctx.policy.serve_all = false;
        for (uint32_t c = 0; c < cfg_.adversary.reveal_chunks; ++c) ctx.policy.reveal.insert(c);
        ctx.serve_segment = true;
        proposals_.push_back(std::move(ctx));
        attack_done_ = true;
    } else if (strike && script == "das-withhold") {
        ProposalCtx ctx = build(picked, "d", "");
        ctx.policy.serve_all = false;
        for (uint32_t c = 0; c < cfg_.adversary.reveal_chunks; ++c) ctx.policy.reveal.insert(c);
        ctx.serve_segment = false;
        proposals_.push_back(std::move(ctx));
        attack_done_ = true;
    } else {
        proposals_.push_back(build(picked, "h", ""));
    }

    for (const ProposalCtx& p : proposals_) {
        json txs = json::array();
        for (size_t rec : p.included) txs.push_back(records_[rec].hash.hex());
        json fields = {{"h", height},
                       {"epoch", epoch_},
                       {"proposer", proposer},
                       {"block", p.block.header.hash().hex()},
                       {"da", p.block.header.da_commitment.hex()},
                       {"txs", txs}};
        if (!p.fork.empty()) fields["fork"] = p.fork;
        trace_.event(slot, "propose", fields);
    }
}

bool World::sample_available(const std::string& who, const Digest& commitment,
                             const CodedBlock& coded, const RevealPolicy& policy,
                             uint64_t height, uint64_t slot)
{
    uint64_t plan_seed =
        DetRng::derive(seed_, "sim.das." + who + "." + std::to_string(height), commitment)
            .next();
    auto queries = das_sample_plan(commitment, cfg_.das.samples, cfg_.das.code(), plan_seed);
    std::vector<std::optional<SampleResponse>> responses;
    responses.reserve(queries.size());
    for (const SampleQuery& q : queries) responses.push_back(das_respond(q, coded, policy));
    AvailabilityVerdict verdict = das_decide(queries, responses, cfg_.das.code(), slot);
    counters_.das_samples += queries.size();
    trace_.event(slot, "das.sample",
                 {{"who", who},
                  {"h", height},
                  {"block", commitment.hex()},
                  {"available", verdict.available}});
    return verdict.available;
}

void World::vote_phase(uint64_t slot)
{
    if (halted_ || proposals_.empty() || slot != round_start_ + cfg_.delta) return;
    uint64_t height = branch_.size() + 1;
    size_t honest_seen = 0;
    for (const auto& [id, key] : cur_set_.members) {
        std::vector<const ProposalCtx*> targets;
        if (corrupt_ids_.count(id)) {
            // The coalition votes for everything the adversary proposed.
            for (const ProposalCtx& p : proposals_) targets.push_back(&p);
        } else {
            // Honest validators see one proposal; with a split broadcast,
            // which one depends on where they sit.
            const ProposalCtx& p = proposals_[honest_seen++ % proposals_.size()];
            bool ok = true;
            if (cfg_.das.enabled) {
                ok = sample_available(id, p.block.header.da_commitment, p.coded, p.policy,
                                      height, slot);
            }
            if (ok) {
                targets.push_back(&p);
            } else {
                trace_.event(slot, "vote.refused",
                             {{"voter", id},
                              {"h", height},
                              {"block", p.block.header.hash().hex()},
                              {"reason", "unavailable"}});
            }
        }
        for (const ProposalCtx* p : targets) {
            Vote vote = make_vote(id, key, p->block.header);
            votes_by_block_[p->block.header.hash()].push_back(vote);
            all_votes_.push_back(vote);
            ++counters_.votes;
            trace_.event(slot, "vote",
                         {{"voter", id},
                          {"h", height},
                          {"epoch", epoch_},
                          {"block", vote.block_hash.hex()},
                          {"sig", vote.sig.mac.hex()}});
        }
    }
}

void World::cert_phase(uint64_t slot)
{
    if (halted_ || proposals_.empty() || slot != round_start_ + 2 * cfg_.delta) return;
    uint64_t height = branch_.size() + 1;
    bool any = false;
    for (const ProposalCtx& p : proposals_) {
        auto votes = votes_by_block_.find(p.block.header.hash());
        if (votes == votes_by_block_.end()) continue;
        FinalityCertificate cert;
        try {
            cert = finalize(p.block.header, votes->second, cur_set_);
        } catch (const Error&) {
            continue; // below quorum
        }
        ++counters_.certs;
        trace_.event(slot, "cert",
                     {{"h", height},
                      {"epoch", epoch_},
                      {"block", cert.block_hash.hex()},
                      {"votes", cert.votes.size()}});
        FinalEntry entry{p.block, cert, p.coded, p.policy, p.serve_segment, slot, p.included};
        if (!any) {
            any = true;
            for (size_t rec : p.included) {
                records_[rec].included_height = height;
                included_.insert(rec);
            }
            branch_.push_back(std::move(entry));
        } else {
            // A second certificate at the same height: catastrophic, and
            // exactly what the double-vote record will pay for.
            conflict_entry_ = std::move(entry);
            halted_ = true;
        }
    }
    if (!any) {
        ++counters_.failed_rounds;
        trace_.event(slot, "round.failed", {{"h", height}});
    }
    proposals_.clear();
    votes_by_block_.clear();
    round_start_ = slot;
    ++round_index_;
}

// ---------------------------------------------------------------------------
// Rollup pipeline (canonical-branch scripts)
// ---------------------------------------------------------------------------

void World::refresh_node0(uint64_t slot)
{
    (void)slot;
    for (size_t i = node0_view_.size(); i < branch_.size(); ++i) {
        const FinalEntry& e = branch_[i];
        ParentViewEntry entry;
        entry.header = e.block.header;
        entry.finalized = true;
        entry.available = e.policy.serve_all; // operators fetch whole bodies
        if (e.serve_segment) {
            auto seg = e.block.body.segments.find(cfg_.rollup.ns);
            entry.rollup_items = seg == e.block.body.segments.end() ? std::vector<Bytes>{}
                                                                    : seg->second;
        }
        if (e.policy.serve_all) node0_bodies_[e.block.header.height] = e.block.body;
        node0_view_.push_back(std::move(entry));
    }
    std::vector<SourcedTx> ledger =
        extract_rollup_ledger(node0_view_, cfg_.rollup.ns, cfg_.das.enabled);
    if (ledger.size() != node0_ledger_.size()) {
        node0_ledger_ = std::move(ledger);
        view_chain_ = build_rollup_chain(node0_ledger_,
                                         {cfg_.rollup.batch_size, cfg_.rollup.isr_interval});
    }
}

RootOracle World::honest_oracle(size_t block_index) const
{
    return [this, block_index](uint64_t t) { return root_at(view_chain_, block_index, t); };
}

RootOracle World::liar_oracle(size_t block_index) const
{
    const RollupBlock& honest = view_chain_.blocks.at(block_index);
    uint32_t j0 = std::min<uint32_t>(honest.isr_count() / 2, honest.isr_count() - 1);
    uint64_t t0 = uint64_t{j0} * honest.isr_interval + 1;
    return [this, block_index, t0](uint64_t t) {
        Digest r = root_at(view_chain_, block_index, t);
        return t >= t0 ? perturb(r, "sim.lie") : r;
    };
}

void World::submit_claims(uint64_t slot)
{
    if (!bridge_on_) return;
    const std::string& script = cfg_.adversary.script;
    uint64_t full_blocks = node0_ledger_.size() / cfg_.rollup.batch_size;
    while (next_claim_ <= full_blocks) {
        uint64_t h = next_claim_;
        const RollupBlock& honest = view_chain_.blocks.at(h - 1);
        bool zk = cfg_.rollup.type == RollupType::kEnshrinedZk;

        bool strike = !attack_done_ && h == cfg_.adversary.target_height
            && (script == "bad-root" || script == "game-liar");
        if (strike) {
            attack_done_ = true;
            uint32_t from = honest.isr_count() / 2;
            corrupt_block_ = corrupt_exec_block(honest, from, "sim.lie");
            CommittedBlockClaim bad = claim_of(*corrupt_block_);
            if (zk) {
                // No proving service signs a false claim; a forged token is
                // the best the adversary has, and the bridge rejects it.
                ValidityProof forged{ProofMode::kIdeal, bad,
                                     tagged_hash("sim.forged", bad.encode())};
                try {
                    bridge_->submit(bad, "op-evil", slot, forged);
                    throw Error(Errc::BadScript, "forged proof was accepted");
                } catch (const Error& e) {
                    if (e.code() != Errc::RejectedProof) throw;
                    ++counters_.validity_rejections;
                    trace_.event(slot, "claim.rejected",
                                 {{"height", h}, {"reason", "forged validity token"}});
                }
                // fall through to the honest claim below
            } else {
                bridge_->submit(bad, "op-evil", slot);
                corrupt_pending_ = true;
                corrupt_claim_slot_ = slot;
                ++counters_.claims;
                trace_.event(slot, "claim.submit",
                             {{"height", h},
                              {"root", bad.state_root.hex()},
                              {"honest", false}});
                drain_bridge_events();
                return; // the lie occupies the height until it is refuted
            }
        }

        CommittedBlockClaim claim = claim_of(honest);
        std::optional<ValidityProof> proof;
        if (zk) {
            proof = prover_.prove_block(view_chain_.state_before(h - 1), honest.txs, claim);
            if (!proof) throw Error(Errc::BadScript, "prover refused an honest claim");
        }
        try {
            bridge_->submit(claim, "op-submit", slot, proof);
        } catch (const Error& e) {
            if (e.code() == Errc::BadScript) break; // height occupied by the lie
            throw;
        }
        ++counters_.claims;
        trace_.event(slot, "claim.submit",
                     {{"height", h}, {"root", claim.state_root.hex()}, {"honest", true}});
        ++next_claim_;
    }
    drain_bridge_events();
}

void World::watchtower_step(uint64_t slot)
{
    if (!bridge_on_ || !corrupt_pending_) return;
    // Seen after delta, acted on one slot later.
    if (slot < corrupt_claim_slot_ + cfg_.delta + 1) return;
    uint64_t h = cfg_.adversary.target_height;
    const std::string& script = cfg_.adversary.script;

    if (script == "bad-root") {
        FraudProof proof = make_fraud_proof(view_chain_, h - 1, *corrupt_block_);
        ++counters_.fraud_challenges;
        if (!bridge_->challenge_fraud(h, proof, "op-watch", slot))
            throw Error(Errc::BadScript, "fraud proof against a lie failed");
        corrupt_pending_ = false;
        drain_bridge_events();
        return;
    }
    if (script == "game-liar") {
        if (!dispute_open_) {
            bridge_->open_dispute(h, "op-watch", claim_of(view_chain_.blocks.at(h - 1)).state_root,
                                  slot);
            dispute_open_ = true;
            drain_bridge_events();
            return;
        }
        dispute_step(slot);
    }
}

void World::dispute_step(uint64_t slot)
{
    uint64_t h = cfg_.adversary.target_height;
    const GameState* game = bridge_->dispute_state(h);
    if (!game) return; // already resolved
    size_t bi = h - 1;
    if (game->terminal()) {
        auto inputs = make_step_inputs(view_chain_, bi, *corrupt_block_, game->lo, game->hi);
        GameOutcome out = bridge_->dispute_referee(h, inputs, std::nullopt, slot);
        trace_.event(slot, "dispute.verdict",
                     {{"height", h},
                      {"root_rejected", out.root_rejected},
                      {"challenger_slashed", out.challenger_slashed},
                      {"reason", out.reason}});
        corrupt_pending_ = false;
        dispute_open_ = false;
        drain_bridge_events();
        return;
    }
    // One split/pick round per slot. The defender is the liar.
    RootOracle def = liar_oracle(bi);
    RootOracle chal = honest_oracle(bi);
    const RootOracle& splitter = game->splitter == GamePlayer::Defender ? def : chal;
    const RootOracle& picker = game->splitter == GamePlayer::Defender ? chal : def;
    SplitMsg split = split_by(*game, splitter);
    std::optional<PickMsg> pick = pick_by(*game, split, picker);
    bridge_->dispute_move(h, split, pick, slot);
    ++counters_.dispute_rounds;
    drain_bridge_events();
}

void World::sovereign_claims(uint64_t slot)
{
    if (bridge_on_ || !pipeline_on_) return;
    const std::string& script = cfg_.adversary.script;
    uint64_t len = node0_ledger_.size();
    bool zk = cfg_.rollup.type == RollupType::kSovereignZk;

    if (len > published_len_) {
        if (zk) {
            std::vector<Transaction> delta;
            for (uint64_t i = published_len_; i < len; ++i)
                delta.push_back(node0_ledger_[i].tx);
            if (!carried_proof_) {
                carried_proof_ = prover_.prove_history(RollupState{}, delta);
            } else {
                auto next = prover_.extend_history(*carried_proof_, carried_state_,
                                                   carried_peaks_, delta);
                if (!next) throw Error(Errc::BadScript, "honest history extension refused");
                carried_proof_ = *next;
            }
            for (const Transaction& tx : delta) {
                carried_state_ = apply_tx(carried_state_, tx);
                carried_peaks_.append(history_leaf(tx, state_root(carried_state_)));
            }
            if (script == "bad-root" && !attack_done_
                && len >= cfg_.adversary.target_height) {
                attack_done_ = true;
                RecursiveValidityProof forged = *carried_proof_;
                forged.statement.state_root = perturb(forged.statement.state_root, "sim.lie");
                if (prover_.verify_history(forged))
                    throw Error(Errc::BadScript, "forged history token verified");
                ++counters_.validity_rejections;
                trace_.event(slot, "proof.rejected",
                             {{"len", len}, {"reason", "forged recursive proof"}});
            }
            trace_.event(slot, "history.proof",
                         {{"len", len},
                          {"root", carried_proof_->statement.history_root.hex()},
                          {"state", carried_proof_->statement.state_root.hex()}});
            if (!prover_.verify_history(*carried_proof_))
                throw Error(Errc::BadScript, "honest history proof failed to verify");
            acceptances_.push_back({"history", len, carried_proof_->statement.state_root,
                                    "client-0", slot});
            confirm_ledger_range(published_len_, len, slot + cfg_.delta);
        } else {
            StateRoot root = len == 0 ? state_root(RollupState{})
                                      : view_chain_.tx_roots_after.at(len - 1);
            pending_history_.push_back({len, root, slot});
            trace_.event(slot, "history.claim",
                         {{"len", len},
                          {"root", view_chain_.history.prefix_root(len).hex()},
                          {"state", root.hex()}});
        }
        published_len_ = len;
    }

    if (zk) return;

    // Optimistic settlement: claims mature after the objection window.
    if (!settlement_halted_) {
        for (const PendingHistory& ph : pending_history_) {
            if (ph.slot + cfg_.rollup.t_fraud != slot) continue;
            if (ph.len <= confirmed_len_) continue;
            acceptances_.push_back({"history", ph.len, ph.root, "client-0", slot});
            confirm_ledger_range(confirmed_len_, ph.len, slot + cfg_.delta);
            confirmed_len_ = ph.len;
        }
    }

    // Scripted prover fields contest the history once it is long enough.
    bool due = !tournament_done_ && published_len_ >= cfg_.adversary.liar_from + 2
        && (script == "tournament-liars" || script == "silent-provers");
    if (!due) return;
    tournament_done_ = true;

    ChainHistoryProver honest("prover-0", &view_chain_, &node0_bodies_, cfg_.rollup.ns);
    TournamentContext ctx;
    ctx.genesis_root = state_root(RollupState{});
    ctx.ns = cfg_.rollup.ns;
    ctx.head_height = branch_.size();
    for (const FinalEntry& e : branch_) {
        ctx.body_roots[e.block.header.height] = e.block.header.body_root;
    }

    if (script == "silent-provers") {
        SilentHistoryProver mute_a("mute-0", honest.claim());
        HistoryClaim lie = honest.claim();
        lie.state_root = perturb(lie.state_root, "sim.lie");
        SilentHistoryProver mute_b("mute-1", lie);
        trace_.event(slot, "tournament.open", {{"provers", 2}, {"silent", true}});
        try {
            run_tournament({&mute_a, &mute_b}, ctx, DetRng::derive(seed_, "sim.tour").next());
            throw Error(Errc::BadScript, "a silent field produced a winner");
        } catch (const Error& e) {
            if (e.code() != Errc::NoProverAvailable) throw;
            settlement_halted_ = true;
            trace_.event(slot, "tournament.stalled", {{"reason", "every prover forfeited"}});
        }
        return;
    }

    std::vector<std::unique_ptr<LyingHistoryProver>> liars;
    std::vector<const HistoryProver*> field{&honest};
    for (uint32_t i = 0; i < cfg_.adversary.liars; ++i) {
        liars.push_back(std::make_unique<LyingHistoryProver>(
            "liar-" + std::to_string(i), &view_chain_, &node0_bodies_, cfg_.rollup.ns,
            cfg_.adversary.liar_from + i, "sim.lie." + std::to_string(i)));
        field.push_back(liars.back().get());
    }
    trace_.event(slot, "tournament.open", {{"provers", field.size()}, {"silent", false}});
    TournamentResult result =
        run_tournament(field, ctx, DetRng::derive(seed_, "sim.tour").next());
    counters_.tour.games += result.stats.games;
    counters_.tour.prefix_queries += result.stats.prefix_queries;
    counters_.tour.reveals += result.stats.reveals;
    counters_.tour.step_queries += result.stats.step_queries;
    trace_.event(slot, "tournament.result",
                 {{"winner", result.winner_id},
                  {"len", result.winner.len},
                  {"state", result.winner.state_root.hex()},
                  {"games", result.stats.games}});
    acceptances_.push_back({"history", result.winner.len, result.winner.state_root,
                            "client-0", slot});
    // The contested prefix settles at resolution rather than by timeout.
    if (result.winner.len > confirmed_len_) {
        confirm_ledger_range(confirmed_len_, result.winner.len, slot + cfg_.delta);
        confirmed_len_ = result.winner.len;
    }
}

void World::pipeline_step(uint64_t slot)
{
    if (!pipeline_on_) return;
    refresh_node0(slot);
    submit_claims(slot);
    sovereign_claims(slot);
    watchtower_step(slot);
}

void World::drain_bridge_events()
{
    if (!bridge_) return;
    const auto& events = bridge_->events();
    for (; bridge_events_seen_ < events.size(); ++bridge_events_seen_) {
        const BridgeEventRecord& ev = events[bridge_events_seen_];
        trace_.event(ev.slot, "bridge." + ev.kind,
                     {{"height", ev.height}, {"detail", ev.detail}});
        if (ev.kind == "accept") {
            const RollupBlock& block = view_chain_.blocks.at(ev.height - 1);
            acceptances_.push_back({"bridge", ev.height, claim_of(block).state_root, "bridge",
                                    ev.slot});
            uint64_t lo = (ev.height - 1) * cfg_.rollup.batch_size;
            confirm_ledger_range(lo, lo + block.txs.size(), ev.slot + cfg_.delta);
        }
    }
}

void World::bridge_step(uint64_t slot)
{
    if (!bridge_) return;
    bridge_->tick(slot);
    drain_bridge_events();
}

void World::schedule_confirm(size_t record, uint64_t slot)
{
    pending_confirms_[slot].push_back(record);
}

void World::confirm_ledger_range(uint64_t from, uint64_t to, uint64_t slot)
{
    for (uint64_t i = from; i < to && i < node0_ledger_.size(); ++i) {
        auto rec = record_by_hash_.find(node0_ledger_[i].tx.hash());
        if (rec != record_by_hash_.end()) schedule_confirm(rec->second, slot);
    }
}

void World::try_withdraw(size_t record, uint64_t slot)
{
    if (!bridge_on_) return;
    const TxRecord& rec = records_[record];
    for (size_t i = 0; i < node0_ledger_.size(); ++i) {
        if (node0_ledger_[i].tx.hash() != rec.hash) continue;
        size_t bi = i / cfg_.rollup.batch_size;
        uint64_t local = i % cfg_.rollup.batch_size;
        WithdrawProof proof = make_withdraw_proof(view_chain_, bi, local);
        uint64_t paid = bridge_->withdraw(proof, slot);
        ++counters_.withdrawals;
        (void)paid;
        drain_bridge_events();
        return;
    }
}

void World::drain_confirms(uint64_t slot)
{
    auto it = pending_confirms_.find(slot);
    if (it == pending_confirms_.end()) return;
    for (size_t rec_index : it->second) {
        TxRecord& rec = records_[rec_index];
        if (rec.confirm_slot) continue;
        rec.confirm_slot = slot;
        trace_.event(slot, "client.confirm",
                     {{"tx", rec.hash.hex()}, {"latency", slot - rec.submit_slot}});
        if (rec.is_burn) try_withdraw(rec_index, slot);
    }
    pending_confirms_.erase(it);
}

// ---------------------------------------------------------------------------
// Observers
// ---------------------------------------------------------------------------

const FinalEntry& World::entry_for(const ClientNode& client, size_t index) const
{
    if (conflict_entry_ && client.id == "client-1"
        && index + 1 == cfg_.adversary.target_height) {
        return *conflict_entry_;
    }
    return branch_.at(index);
}

void World::observe_entry(ClientNode& client, const FinalEntry& entry, uint64_t slot)
{
    ParentViewEntry view;
    view.header = entry.block.header;
    view.finalized = true;
    view.available = true;
    if (cfg_.das.enabled) {
        view.available = sample_available(client.id, entry.block.header.da_commitment,
                                          entry.coded, entry.policy,
                                          entry.block.header.height, slot);
    }
    if (entry.serve_segment) {
        auto seg = entry.block.body.segments.find(cfg_.rollup.ns);
        view.rollup_items = seg == entry.block.body.segments.end() ? std::vector<Bytes>{}
                                                                   : seg->second;
    }
    client.view.push_back(std::move(view));
    client.certs.push_back(entry.cert);
    client.hashes.push_back(entry.block.header.hash());
}

void World::client_step(ClientNode& client, uint64_t slot)
{
    if (slot < client.online_from) return;

    // A social restart can rewrite finalized history under the client's
    // feet; an honest client follows the community, which is precisely what
    // the forensic log is there to capture.
    size_t keep = 0;
    while (keep < client.hashes.size() && keep < branch_.size()
           && client.hashes[keep] == entry_for(client, keep).block.header.hash()) {
        ++keep;
    }
    if (keep < client.hashes.size() && keep < branch_.size()) {
        client.view.resize(keep);
        client.certs.resize(keep);
        client.hashes.resize(keep);
    }

    for (size_t i = client.view.size(); i < branch_.size(); ++i) {
        const FinalEntry& entry = entry_for(client, i);
        if (entry.final_slot + cfg_.delta > slot) break;
        observe_entry(client, entry, slot);
    }

    std::vector<SourcedTx> ledger =
        extract_rollup_ledger(client.view, cfg_.rollup.ns, cfg_.das.enabled);
    std::vector<Digest> hashes;
    hashes.reserve(ledger.size());
    for (const SourcedTx& st : ledger) hashes.push_back(st.tx.hash());
    if (hashes != client.last_hashes) {
        client.last_hashes = hashes;
        client.log.snapshots.push_back({slot, hashes});
        trace_.event(slot, "client.ledger",
                     {{"client", client.id},
                      {"len", hashes.size()},
                      {"head", hashes.empty() ? std::string{} : hashes.back().hex()}});
    }
}

// ---------------------------------------------------------------------------
// Verdict, metrics, run driver
// ---------------------------------------------------------------------------

void World::finish_run()
{
    uint64_t end = cfg_.slots;

    // Light-client sync over each observer's records: how much of the chain
    // a header-only client accepts, with availability verdicts enforced.
    for (const ClientNode& c : clients_) {
        std::vector<BlockHeader> headers;
        std::map<uint64_t, bool> availability;
        for (const ParentViewEntry& e : c.view) {
            headers.push_back(e.header);
            availability[e.header.height] = e.available;
        }
        LightSyncResult sync = light_sync(headers, c.certs, availability,
                                          genesis_header().hash(), sets_by_epoch_,
                                          cfg_.das.enabled);
        trace_.event(end, "light.sync",
                     {{"client", c.id},
                      {"accepted_height", sync.accepted_height},
                      {"ok", sync.ok}});
    }

    std::vector<ClientLedgerLog> logs;
    for (const ClientNode& c : clients_) logs.push_back(c.log);
    std::vector<LedgerViolation> ledger_v = check_ledger_safety(logs);
    std::vector<StateViolation> state_v = check_state_safety(acceptances_);
    for (const LedgerViolation& v : ledger_v) {
        trace_.event(end, "violation",
                     {{"kind", "ledger"},
                      {"index", v.index},
                      {"a", v.a.hex()},
                      {"b", v.b.hex()},
                      {"witness_a", v.witness_a},
                      {"witness_b", v.witness_b}});
    }
    for (const StateViolation& v : state_v) {
        trace_.event(end, "violation",
                     {{"kind", "state"},
                      {"domain", v.domain},
                      {"index", v.index},
                      {"a", v.a.hex()},
                      {"b", v.b.hex()}});
    }

    bool violated = !ledger_v.empty() || !state_v.empty();
    AccountabilityReport report = analyze_accountability(
        violated, all_votes_, all_keys_, honest_ids_, set0_.accountability_floor());
    trace_.event(end, "forensics",
                 {{"violation", violated},
                  {"guilty", report.guilty.size()},
                  {"floor", report.floor},
                  {"accountable", report.accountable}});
    trace_.finish();

    result_.verdict = make_verdict(ledger_v, state_v, report);
    result_.safety_violation = violated;
    result_.accountable = report.accountable;
    result_.exit_code = violated ? 2 : 0;

    // metrics
    uint64_t confirmed = 0, latency_sum = 0, latency_max = 0, included = 0;
    for (const TxRecord& rec : records_) {
        if (rec.included_height) ++included;
        if (!rec.confirm_slot) continue;
        ++confirmed;
        uint64_t lat = *rec.confirm_slot - rec.submit_slot;
        latency_sum += lat;
        latency_max = std::max(latency_max, lat);
    }
    uint64_t bound = 2 * cfg_.round_slots() + cfg_.delta
        + (cfg_.rollup.optimistic() ? cfg_.rollup.t_fraud : 0);
    json metrics;
    metrics["parent"] = {{"heights", branch_.size()},
                         {"rounds", round_index_},
                         {"failed_rounds", counters_.failed_rounds},
                         {"certs", counters_.certs},
                         {"votes", counters_.votes},
                         {"das_samples", counters_.das_samples}};
    metrics["txs"] = {{"submitted", records_.size()},
                      {"included", included},
                      {"confirmed", confirmed},
                      {"unconfirmed", records_.size() - confirmed},
                      {"latency_max", latency_max},
                      {"latency_avg", confirmed ? double(latency_sum) / double(confirmed) : 0.0},
                      {"latency_bound", bound}};
    metrics["proofs"] = {{"claims", counters_.claims},
                         {"fraud_challenges", counters_.fraud_challenges},
                         {"validity_rejections", counters_.validity_rejections},
                         {"dispute_rounds", counters_.dispute_rounds}};
    if (bridge_) {
        metrics["bridge"] = {{"accepted", bridge_->accepted().size()},
                             {"pending", bridge_->pending_count()},
                             {"escrow", bridge_->escrow()},
                             {"deposited", bridge_->deposited_total()},
                             {"withdrawn", bridge_->withdrawn_total()},
                             {"slashed", bridge_->slashed_total()},
                             {"withdrawals", counters_.withdrawals}};
    }
    metrics["tournament"] = {{"games", counters_.tour.games},
                             {"prefix_queries", counters_.tour.prefix_queries},
                             {"reveals", counters_.tour.reveals},
                             {"step_queries", counters_.tour.step_queries}};
    uint64_t trace_bytes = 0;
    for (const std::string& line : trace_.lines()) trace_bytes += line.size() + 1;
    metrics["trace"] = {{"records", trace_.records()}, {"bytes", trace_bytes}};
    result_.metrics = metrics;

    json keys;
    for (const auto& [id, key] : all_keys_) keys["validators"][id] = key.hex();
    result_.keys = keys;

    result_.trace = trace_.lines();
    result_.trace_digest = trace_.digest();
}

SimResult World::run()
{
    json header;
    header["version"] = 1;
    header["seed"] = seed_;
    header["config"] = cfg_.to_json();
    header["quorum"] = set0_.quorum();
    header["floor"] = set0_.accountability_floor();
    header["das_false_accept_bound"] = cfg_.das.enabled
        ? das_false_accept_probability(cfg_.das.total_chunks, cfg_.adversary.reveal_chunks,
                                       cfg_.das.samples)
        : 1.0;
    trace_.header(header);

    for (uint64_t slot = 0; slot < cfg_.slots; ++slot) {
        materialize_txs(slot);
        restart_if_scheduled(slot);
        cert_phase(slot);
        propose_phase(slot);
        vote_phase(slot);
        pipeline_step(slot);
        bridge_step(slot);
        for (ClientNode& c : clients_) client_step(c, slot);
        drain_confirms(slot);
    }
    finish_run();
    return std::move(result_);
}

} // namespace

SimResult run_sim(const ScenarioConfig& config, uint64_t seed)
{
    World world(config, seed);
    return world.run();
}

} // namespace rollup::sim
