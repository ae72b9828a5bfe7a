// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "rollup/bytes.hpp"
#include "rollup/merkle.hpp"
#include "rollup/reed_solomon.hpp"
#include "rollup/sha256.hpp"

namespace rollup {

// Data-availability sampling: a block body is erasure-coded into n chunks
// committed by a Merkle root; samplers draw s distinct chunk indices through
// an identity-stripping relay and accept only if every draw comes back with a
// valid opening. With s >= k, acceptance implies at least k distinct chunks
// are obtainable, which is enough to reconstruct the body.

struct CodedBlock {
    CodeParams params;
    std::vector<Bytes> chunks;
    Digest commitment; // Merkle root over chunk digests; position = chunk index
};

Digest das_chunk_leaf(BytesView chunk);

CodedBlock das_encode(BytesView body, const CodeParams& params);

/// Recomputes the commitment from scratch; rejects tampered chunk sets.
bool das_verify_block(const CodedBlock& block);

struct SampleQuery {
    Digest commitment;
    uint32_t chunk_index = 0;
};

struct SampleResponse {
    uint32_t chunk_index = 0;
    Bytes chunk;
    MerklePath path;
};

/// s distinct indices, deterministic in (seed, commitment). Throws
/// Errc::SampleCountTooLarge when s exceeds n.
std::vector<SampleQuery> das_sample_plan(const Digest& commitment, uint32_t samples,
                                         const CodeParams& params, uint64_t seed);

/// Which chunks a holder is willing to serve. Honest holders serve all;
/// a withholding adversary fixes a reveal set up front and sticks to it, so
/// responses cannot depend on who asks (the relay strips identities).
struct RevealPolicy {
    bool serve_all = true;
    std::set<uint32_t> reveal; // used when !serve_all

    bool serves(uint32_t index) const { return serve_all || reveal.count(index) != 0; }
};

std::optional<SampleResponse> das_respond(const SampleQuery& query, const CodedBlock& block,
                                          const RevealPolicy& policy);

bool das_verify_response(const Digest& commitment, const SampleQuery& query,
                         const SampleResponse& response, const CodeParams& params);

struct AvailabilityVerdict {
    Digest commitment;
    bool available = false;
    uint32_t samples = 0;
    uint64_t decided_slot = 0;
};

/// Accept iff every query has a valid matching response (missing or invalid
/// responses are rejections).
AvailabilityVerdict das_decide(const std::vector<SampleQuery>& queries,
                               const std::vector<std::optional<SampleResponse>>& responses,
                               const CodeParams& params, uint64_t slot);

/// Probability that s uniform distinct samples all land inside a reveal set
/// of size r out of n chunks: C(r,s)/C(n,s). Zero when s > r.
double das_false_accept_probability(uint32_t n, uint32_t revealed, uint32_t samples);

} // namespace rollup
