// SPDX-License-Identifier: Apache-2.0
#include "rollup/reed_solomon.hpp"

#include <algorithm>
#include <map>

#include "rollup/error.hpp"
#include "rollup/gf256.hpp"

namespace rollup {

namespace {

// Lagrange coefficients for evaluating at `target` the polynomial through
// points x = xs[0..k-1]: value(target) = sum coeff[i] * value(xs[i]).
std::vector<uint8_t> lagrange_coeffs(const std::vector<uint8_t>& xs, uint8_t target) {
    const size_t k = xs.size();
    std::vector<uint8_t> coeffs(k);
    for (size_t i = 0; i < k; ++i) {
        uint8_t num = 1, den = 1;
        for (size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            num = gf256::mul(num, gf256::sub(target, xs[j]));
            den = gf256::mul(den, gf256::sub(xs[i], xs[j]));
        }
        coeffs[i] = gf256::div(num, den);
    }
    return coeffs;
}

} // namespace

void CodeParams::validate() const {
    if (data_chunks == 0 || chunk_size == 0 || data_chunks > total_chunks ||
        total_chunks > 256)
        throw Error(Errc::BadConfig, "reed-solomon: need 0 < k <= n <= 256, chunk_size > 0");
}

size_t CodeParams::capacity() const {
    const size_t raw = size_t{data_chunks} * chunk_size;
    return raw < 4 ? 0 : raw - 4;
}

std::vector<Bytes> rs_encode(BytesView body, const CodeParams& params) {
    params.validate();
    if (body.size() > params.capacity())
        throw Error(Errc::BodyTooLarge, "reed-solomon: framed body exceeds k*chunk_size");

    ByteWriter frame;
    frame.put_u32(static_cast<uint32_t>(body.size()));
    frame.put_raw(body);
    Bytes framed = frame.take();
    framed.resize(size_t{params.data_chunks} * params.chunk_size, 0);

    std::vector<Bytes> chunks(params.total_chunks, Bytes(params.chunk_size, 0));
    for (uint32_t i = 0; i < params.data_chunks; ++i)
        std::copy_n(framed.begin() + size_t{i} * params.chunk_size, params.chunk_size,
                    chunks[i].begin());

    std::vector<uint8_t> xs(params.data_chunks);
    for (uint32_t i = 0; i < params.data_chunks; ++i) xs[i] = static_cast<uint8_t>(i);
    for (uint32_t t = params.data_chunks; t < params.total_chunks; ++t) {
        const auto coeffs = lagrange_coeffs(xs, static_cast<uint8_t>(t));
        for (uint32_t b = 0; b < params.chunk_size; ++b) {
            uint8_t acc = 0;
            for (uint32_t i = 0; i < params.data_chunks; ++i)
                acc = gf256::add(acc, gf256::mul(coeffs[i], chunks[i][b]));
            chunks[t][b] = acc;
        }
    }
    return chunks;
}

Bytes rs_reconstruct(const std::vector<std::pair<uint32_t, Bytes>>& chunks,
                     const CodeParams& params) {
    params.validate();
    std::map<uint32_t, const Bytes*> have;
    for (const auto& [index, data] : chunks) {
        if (index >= params.total_chunks)
            throw Error(Errc::BadConfig, "reed-solomon: chunk index out of range");
        if (data.size() != params.chunk_size)
            throw Error(Errc::BadConfig, "reed-solomon: chunk size mismatch");
        have.emplace(index, &data);
    }
    if (have.size() < params.data_chunks)
        throw Error(Errc::InsufficientChunks, "reed-solomon: fewer than k distinct chunks");

    std::vector<uint8_t> xs;
    std::vector<const Bytes*> cols;
    for (const auto& [index, data] : have) {
        if (xs.size() == params.data_chunks) break;
        xs.push_back(static_cast<uint8_t>(index));
        cols.push_back(data);
    }

    Bytes framed(size_t{params.data_chunks} * params.chunk_size, 0);
    for (uint32_t t = 0; t < params.data_chunks; ++t) {
        uint8_t* out = framed.data() + size_t{t} * params.chunk_size;
        auto it = have.find(t);
        if (it != have.end()) {
            std::copy(it->second->begin(), it->second->end(), out);
            continue;
        }
        const auto coeffs = lagrange_coeffs(xs, static_cast<uint8_t>(t));
        for (uint32_t b = 0; b < params.chunk_size; ++b) {
            uint8_t acc = 0;
            for (size_t i = 0; i < xs.size(); ++i)
                acc = gf256::add(acc, gf256::mul(coeffs[i], (*cols[i])[b]));
            out[b] = acc;
        }
    }

    ByteReader reader(framed);
    const uint32_t body_len = reader.get_u32();
    if (body_len > framed.size() - 4)
        throw Error(Errc::BadConfig, "reed-solomon: corrupt length frame");
    return Bytes(framed.begin() + 4, framed.begin() + 4 + body_len);
}

} // namespace rollup
