// SPDX-License-Identifier: Apache-2.0
#include "rollup/parent.hpp"

#include <algorithm>

#include "rollup/error.hpp"

namespace rollup {

namespace {

Digest body_entry_leaf(const NamespaceId& ns, const Digest& item_root) {
    Hasher h;
    h.put_str("body.entry");
    h.put_str(ns);
    h.put_digest(item_root);
    return h.finalize();
}

Digest body_item_leaf(BytesView item) {
    return tagged_hash("body.item", item);
}

std::vector<Digest> item_leaves(const std::vector<Bytes>& items) {
    std::vector<Digest> leaves;
    leaves.reserve(items.size());
    for (const Bytes& item : items) leaves.push_back(body_item_leaf(item));
    return leaves;
}

} // namespace

// ---------------------------------------------------------------------------
// Validator set
// ---------------------------------------------------------------------------

uint32_t ValidatorSet::quorum() const {
    return static_cast<uint32_t>((2 * members.size() + 2) / 3);
}

uint32_t ValidatorSet::accountability_floor() const {
    return static_cast<uint32_t>((members.size() + 2) / 3);
}

const Digest* ValidatorSet::key_of(const ValidatorId& id) const {
    for (const auto& [member, key] : members)
        if (member == id) return &key;
    return nullptr;
}

ValidatorId ValidatorSet::proposer_at(uint64_t round) const {
    if (members.empty()) throw Error(Errc::BadConfig, "validator set is empty");
    return members[round % members.size()].first;
}

ValidatorSet ValidatorSet::make(uint64_t epoch, const std::vector<ValidatorId>& ids,
                                uint64_t key_seed) {
    ValidatorSet set;
    set.epoch = epoch;
    for (const ValidatorId& id : ids) set.members.emplace_back(id, derive_key(key_seed, id));
    std::sort(set.members.begin(), set.members.end());
    for (size_t i = 1; i < set.members.size(); ++i)
        if (set.members[i].first == set.members[i - 1].first)
            throw Error(Errc::BadConfig, "duplicate validator id " + set.members[i].first);
    return set;
}

// ---------------------------------------------------------------------------
// Headers and bodies
// ---------------------------------------------------------------------------

Bytes BlockHeader::encode() const {
    ByteWriter w;
    w.put_u64(height);
    w.put_u64(epoch);
    w.put_raw(parent_hash.bytes);
    w.put_raw(body_root.bytes);
    w.put_raw(da_commitment.bytes);
    return w.take();
}

Digest BlockHeader::hash() const {
    return tagged_hash("header", encode());
}

BlockHeader genesis_header() {
    BlockHeader h;
    h.body_root = ParentBody{}.body_root();
    return h;
}

Bytes ParentBody::encode() const {
    ByteWriter w;
    w.put_u32(static_cast<uint32_t>(segments.size()));
    for (const auto& [ns, items] : segments) {
        w.put_str(ns);
        w.put_u32(static_cast<uint32_t>(items.size()));
        for (const Bytes& item : items) w.put_bytes(item);
    }
    return w.take();
}

ParentBody ParentBody::decode(BytesView bytes) {
    ByteReader r(bytes);
    ParentBody body;
    const uint32_t ns_count = r.get_u32();
    NamespaceId prev;
    for (uint32_t i = 0; i < ns_count; ++i) {
        NamespaceId ns = r.get_str();
        if (i > 0 && ns <= prev) throw CodecError("body: namespaces out of order");
        prev = ns;
        const uint32_t item_count = r.get_u32();
        std::vector<Bytes> items;
        items.reserve(item_count);
        for (uint32_t j = 0; j < item_count; ++j) items.push_back(r.get_bytes());
        body.segments.emplace(std::move(ns), std::move(items));
    }
    if (!r.exhausted()) throw CodecError("body: trailing bytes");
    return body;
}

Digest ParentBody::item_root(const NamespaceId& ns) const {
    auto it = segments.find(ns);
    if (it == segments.end()) return merkle_root(std::vector<Digest>{});
    return merkle_root(item_leaves(it->second));
}

Digest ParentBody::body_root() const {
    std::vector<Digest> leaves;
    for (const auto& [ns, items] : segments)
        leaves.push_back(body_entry_leaf(ns, merkle_root(item_leaves(items))));
    return merkle_root(leaves);
}

ParentBlock propose(const BlockHeader& parent, uint64_t epoch, ParentBody body,
                    const CodeParams& da_params) {
    ParentBlock block;
    block.header.height = parent.height + 1;
    block.header.epoch = epoch;
    block.header.parent_hash = parent.hash();
    block.header.body_root = body.body_root();
    block.header.da_commitment = das_encode(body.encode(), da_params).commitment;
    block.body = std::move(body);
    return block;
}

// ---------------------------------------------------------------------------
// Votes and certificates
// ---------------------------------------------------------------------------

Bytes Vote::signing_bytes() const {
    ByteWriter w;
    w.put_str("vote");
    w.put_str(voter);
    w.put_u64(epoch);
    w.put_u64(height);
    w.put_raw(block_hash.bytes);
    return w.take();
}

Vote make_vote(const ValidatorId& voter, const Digest& key, const BlockHeader& header) {
    Vote v;
    v.voter = voter;
    v.epoch = header.epoch;
    v.height = header.height;
    v.block_hash = header.hash();
    v.sig = sign(key, v.signing_bytes());
    return v;
}

bool vote_valid(const Vote& vote, const ValidatorSet& set) {
    const Digest* key = set.key_of(vote.voter);
    if (key == nullptr) return false;
    return verify_sig(*key, vote.signing_bytes(), vote.sig);
}

FinalityCertificate finalize(const BlockHeader& header, const std::vector<Vote>& votes,
                             const ValidatorSet& set) {
    FinalityCertificate cert;
    cert.block_hash = header.hash();
    cert.height = header.height;
    cert.epoch = header.epoch;
    for (const Vote& v : votes) {
        if (v.block_hash != cert.block_hash || v.height != header.height ||
            v.epoch != header.epoch)
            continue;
        if (!vote_valid(v, set)) continue;
        cert.votes.push_back(v);
    }
    std::sort(cert.votes.begin(), cert.votes.end(),
              [](const Vote& a, const Vote& b) { return a.voter < b.voter; });
    cert.votes.erase(std::unique(cert.votes.begin(), cert.votes.end(),
                                 [](const Vote& a, const Vote& b) {
                                     return a.voter == b.voter;
                                 }),
                     cert.votes.end());
    if (cert.votes.size() < set.quorum())
        throw Error(Errc::InsufficientQuorum,
                    "height " + std::to_string(header.height) + ": " +
                        std::to_string(cert.votes.size()) + " of " +
                        std::to_string(set.quorum()) + " votes");
    return cert;
}

bool verify_certificate(const FinalityCertificate& cert, const ValidatorSet& set) {
    if (cert.epoch != set.epoch) return false;
    std::vector<ValidatorId> voters;
    for (const Vote& v : cert.votes) {
        if (v.block_hash != cert.block_hash || v.height != cert.height ||
            v.epoch != cert.epoch)
            return false;
        if (!vote_valid(v, set)) return false;
        voters.push_back(v.voter);
    }
    std::sort(voters.begin(), voters.end());
    if (std::adjacent_find(voters.begin(), voters.end()) != voters.end()) return false;
    return voters.size() >= set.quorum();
}

ChainCheck verify_header_chain(const std::vector<BlockHeader>& headers,
                               const std::vector<FinalityCertificate>& certs,
                               const Digest& genesis_hash,
                               const std::map<uint64_t, ValidatorSet>& sets_by_epoch) {
    ChainCheck result;
    if (headers.size() != certs.size()) {
        result.ok = false;
        result.reason = "certificate count does not match header count";
        return result;
    }
    Digest prev_hash = genesis_hash;
    uint64_t prev_height = 0;
    uint64_t prev_epoch = 0;
    for (size_t i = 0; i < headers.size(); ++i) {
        const BlockHeader& h = headers[i];
        result.height = h.height;
        auto fail = [&](const std::string& why) {
            result.ok = false;
            result.reason = why;
            return result;
        };
        if (h.height != prev_height + 1) return fail("non-consecutive height");
        if (h.parent_hash != prev_hash) return fail("broken parent link");
        if (h.epoch < prev_epoch) return fail("epoch went backwards");
        auto set_it = sets_by_epoch.find(h.epoch);
        if (set_it == sets_by_epoch.end()) return fail("unknown epoch");
        const FinalityCertificate& cert = certs[i];
        if (cert.block_hash != h.hash() || cert.height != h.height) {
            return fail("certificate is for a different block");
        }
        if (!verify_certificate(cert, set_it->second)) return fail("invalid certificate");
        prev_hash = h.hash();
        prev_height = h.height;
        prev_epoch = h.epoch;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Equivocation forensics
// ---------------------------------------------------------------------------

bool verify_equivocation(const EquivocationEvidence& ev, const Digest& key) {
    const Vote& a = ev.vote_a;
    const Vote& b = ev.vote_b;
    if (a.voter != ev.validator || b.voter != ev.validator) return false;
    if (a.epoch != b.epoch || a.height != b.height) return false;
    if (a.block_hash == b.block_hash) return false;
    return verify_sig(key, a.signing_bytes(), a.sig) &&
           verify_sig(key, b.signing_bytes(), b.sig);
}

std::vector<EquivocationEvidence> detect_equivocation(
    const std::vector<Vote>& votes, const std::map<ValidatorId, Digest>& keys) {
    // (validator, epoch, height) -> first valid vote seen per block hash.
    std::map<std::tuple<ValidatorId, uint64_t, uint64_t>, std::vector<Vote>> by_slot;
    for (const Vote& v : votes) {
        auto key_it = keys.find(v.voter);
        if (key_it == keys.end()) continue;
        if (!verify_sig(key_it->second, v.signing_bytes(), v.sig)) continue;
        auto& bucket = by_slot[{v.voter, v.epoch, v.height}];
        bool duplicate = false;
        for (const Vote& seen : bucket)
            if (seen.block_hash == v.block_hash) duplicate = true;
        if (!duplicate) bucket.push_back(v);
    }
    std::map<ValidatorId, EquivocationEvidence> per_validator;
    for (const auto& [slot, bucket] : by_slot) {
        if (bucket.size() < 2) continue;
        const ValidatorId& who = std::get<0>(slot);
        if (per_validator.count(who)) continue;
        std::vector<Vote> pair = {bucket[0], bucket[1]};
        std::sort(pair.begin(), pair.end(), [](const Vote& a, const Vote& b) {
            return a.block_hash < b.block_hash;
        });
        per_validator[who] = EquivocationEvidence{who, pair[0], pair[1]};
    }
    std::vector<EquivocationEvidence> out;
    for (auto& [_, ev] : per_validator) out.push_back(std::move(ev));
    return out;
}

// ---------------------------------------------------------------------------
// Namespace access
// ---------------------------------------------------------------------------

ExtractResult extract_namespace(const ParentBody& body, const NamespaceId& ns) {
    ExtractResult result;
    auto it = body.segments.find(ns);
    if (it == body.segments.end()) return result;
    for (size_t i = 0; i < it->second.size(); ++i) {
        try {
            result.txs.push_back(Transaction::decode(it->second[i]));
        } catch (const CodecError& e) {
            result.txs.clear();
            result.diagnostic = "namespace '" + ns + "' item " + std::to_string(i) +
                                " undecodable: " + e.what();
            return result;
        }
    }
    return result;
}

NamespaceOpening make_item_opening(const ParentBody& body, const NamespaceId& ns,
                                   uint64_t item_index) {
    auto it = body.segments.find(ns);
    if (it == body.segments.end() || item_index >= it->second.size())
        throw Error(Errc::BadConfig, "item opening: no such item");
    NamespaceOpening opening;
    opening.ns = ns;
    opening.item_root = body.item_root(ns);
    opening.item_path = merkle_prove(item_leaves(it->second), item_index);

    std::vector<Digest> entry_leaves;
    uint64_t entry_index = 0, i = 0;
    for (const auto& [name, items] : body.segments) {
        entry_leaves.push_back(body_entry_leaf(name, merkle_root(item_leaves(items))));
        if (name == ns) entry_index = i;
        ++i;
    }
    opening.entry_path = merkle_prove(entry_leaves, entry_index);
    return opening;
}

bool verify_item_opening(const Digest& body_root, BytesView item,
                         const NamespaceOpening& opening) {
    if (!merkle_verify(opening.item_root, body_item_leaf(item), opening.item_path))
        return false;
    return merkle_verify(body_root, body_entry_leaf(opening.ns, opening.item_root),
                         opening.entry_path);
}

} // namespace rollup
