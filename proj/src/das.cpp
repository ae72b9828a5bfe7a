// SPDX-License-Identifier: Apache-2.0
#include "rollup/das.hpp"

#include "rollup/error.hpp"
#include "rollup/rng.hpp"

namespace rollup {

namespace {

std::vector<Digest> chunk_leaves(const std::vector<Bytes>& chunks) {
    std::vector<Digest> leaves;
    leaves.reserve(chunks.size());
    for (const Bytes& c : chunks) leaves.push_back(das_chunk_leaf(c));
    return leaves;
}

} // namespace

Digest das_chunk_leaf(BytesView chunk) {
    return tagged_hash("das.chunk", chunk);
}

CodedBlock das_encode(BytesView body, const CodeParams& params) {
    CodedBlock block;
    block.params = params;
    block.chunks = rs_encode(body, params);
    block.commitment = merkle_root(chunk_leaves(block.chunks));
    return block;
}

bool das_verify_block(const CodedBlock& block) {
    if (block.chunks.size() != block.params.total_chunks) return false;
    for (const Bytes& c : block.chunks)
        if (c.size() != block.params.chunk_size) return false;
    return merkle_root(chunk_leaves(block.chunks)) == block.commitment;
}

std::vector<SampleQuery> das_sample_plan(const Digest& commitment, uint32_t samples,
                                         const CodeParams& params, uint64_t seed) {
    params.validate();
    if (samples > params.total_chunks)
        throw Error(Errc::SampleCountTooLarge, "das: more samples than chunks");
    DetRng rng = DetRng::derive(seed, "das.sample", commitment);
    std::vector<SampleQuery> queries;
    queries.reserve(samples);
    for (uint64_t index : rng.sample_distinct(params.total_chunks, samples))
        queries.push_back({commitment, static_cast<uint32_t>(index)});
    return queries;
}

std::optional<SampleResponse> das_respond(const SampleQuery& query, const CodedBlock& block,
                                          const RevealPolicy& policy) {
    if (query.commitment != block.commitment) return std::nullopt;
    if (query.chunk_index >= block.chunks.size()) return std::nullopt;
    if (!policy.serves(query.chunk_index)) return std::nullopt;
    SampleResponse resp;
    resp.chunk_index = query.chunk_index;
    resp.chunk = block.chunks[query.chunk_index];
    resp.path = merkle_prove(chunk_leaves(block.chunks), query.chunk_index);
    return resp;
}

bool das_verify_response(const Digest& commitment, const SampleQuery& query,
                         const SampleResponse& response, const CodeParams& params) {
    if (response.chunk_index != query.chunk_index) return false;
    if (response.chunk.size() != params.chunk_size) return false;
    if (response.path.index != query.chunk_index) return false;
    if (response.path.leaf_count != params.total_chunks) return false;
    return merkle_verify(commitment, das_chunk_leaf(response.chunk), response.path);
}

AvailabilityVerdict das_decide(const std::vector<SampleQuery>& queries,
                               const std::vector<std::optional<SampleResponse>>& responses,
                               const CodeParams& params, uint64_t slot) {
    AvailabilityVerdict verdict;
    verdict.samples = static_cast<uint32_t>(queries.size());
    verdict.decided_slot = slot;
    if (!queries.empty()) verdict.commitment = queries.front().commitment;
    if (responses.size() != queries.size()) return verdict;
    for (size_t i = 0; i < queries.size(); ++i) {
        if (!responses[i]) return verdict;
        if (!das_verify_response(queries[i].commitment, queries[i], *responses[i], params))
            return verdict;
    }
    verdict.available = true;
    return verdict;
}

double das_false_accept_probability(uint32_t n, uint32_t revealed, uint32_t samples) {
    if (samples > n) throw Error(Errc::SampleCountTooLarge, "das: s > n");
    if (samples > revealed) return 0.0;
    // C(r,s)/C(n,s). Exact binomials with one final division keep small cases
    // (like 35/560 = 1/16) exactly representable; fall back to a running
    // product only when the integers would overflow 128 bits.
    auto binomial = [](uint32_t m, uint32_t k) -> std::optional<unsigned __int128> {
        if (k > m - k) k = m - k;
        unsigned __int128 c = 1;
        for (uint32_t i = 1; i <= k; ++i) {
            unsigned __int128 grown = c * (m - k + i);
            if (grown / (m - k + i) != c) return std::nullopt;
            c = grown / i; // C(m-k+i, i): integral at every step
        }
        return c;
    };
    auto num = binomial(revealed, samples);
    auto den = binomial(n, samples);
    if (num && den) return static_cast<double>(*num) / static_cast<double>(*den);
    double p = 1.0;
    for (uint32_t i = 0; i < samples; ++i)
        p *= static_cast<double>(revealed - i) / static_cast<double>(n - i);
    return p;
}

} // namespace rollup
