// SPDX-License-Identifier: Apache-2.0
#include "rollup/sha256.hpp"

#include <cstring>

namespace rollup {

namespace {

constexpr uint32_t kInit[8] = {
    0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
    0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u,
};

constexpr uint32_t kRound[64] = {
    0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
    0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
    0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
    0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
    0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
    0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
    0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
    0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
    0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
    0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
    0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u,
};

inline uint32_t rotr(uint32_t x, int n)
{
    return (x >> n) | (x << (32 - n));
}

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(BytesView data)
{
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        throw CodecError("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw CodecError("invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

Digest Digest::from_hex(std::string_view hex)
{
    Bytes raw = rollup::from_hex(hex);
    if (raw.size() != 32)
        throw CodecError("digest hex must be 32 bytes");
    Digest d;
    std::memcpy(d.bytes.data(), raw.data(), 32);
    return d;
}

Hasher::Hasher()
{
    std::memcpy(state_, kInit, sizeof(state_));
}

void Hasher::compress(const uint8_t* chunk)
{
    uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = (static_cast<uint32_t>(chunk[4 * i]) << 24) |
               (static_cast<uint32_t>(chunk[4 * i + 1]) << 16) |
               (static_cast<uint32_t>(chunk[4 * i + 2]) << 8) |
               static_cast<uint32_t>(chunk[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
        uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }

    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];

    for (int i = 0; i < 64; ++i) {
        uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = h + s1 + ch + kRound[i] + w[i];
        uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }

    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
}

void Hasher::update(BytesView data)
{
    length_ += data.size();
    size_t i = 0;
    if (block_len_ > 0) {
        while (block_len_ < 64 && i < data.size())
            block_[block_len_++] = data[i++];
        if (block_len_ == 64) {
            compress(block_);
            block_len_ = 0;
        }
    }
    while (data.size() - i >= 64) {
        compress(data.data() + i);
        i += 64;
    }
    while (i < data.size())
        block_[block_len_++] = data[i++];
}

Digest Hasher::finalize()
{
    uint64_t bit_len = length_ * 8;
    uint8_t pad = 0x80;
    update(BytesView(&pad, 1));
    uint8_t zero = 0;
    while (block_len_ != 56)
        update(BytesView(&zero, 1));
    uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i)
        len_bytes[i] = static_cast<uint8_t>(bit_len >> (8 * (7 - i)));
    update(BytesView(len_bytes, 8));

    Digest out;
    for (int i = 0; i < 8; ++i) {
        out.bytes[4 * i] = static_cast<uint8_t>(state_[i] >> 24);
        out.bytes[4 * i + 1] = static_cast<uint8_t>(state_[i] >> 16);
        out.bytes[4 * i + 2] = static_cast<uint8_t>(state_[i] >> 8);
        out.bytes[4 * i + 3] = static_cast<uint8_t>(state_[i]);
    }
    return out;
}

Hasher& Hasher::put_u8(uint8_t v)
{
    update(BytesView(&v, 1));
    return *this;
}

Hasher& Hasher::put_u32(uint32_t v)
{
    uint8_t b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<uint8_t>(v >> (8 * i));
    update(BytesView(b, 4));
    return *this;
}

Hasher& Hasher::put_u64(uint64_t v)
{
    uint8_t b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<uint8_t>(v >> (8 * i));
    update(BytesView(b, 8));
    return *this;
}

Hasher& Hasher::put_bytes(BytesView data)
{
    put_u32(static_cast<uint32_t>(data.size()));
    update(data);
    return *this;
}

Hasher& Hasher::put_str(std::string_view s)
{
    put_u32(static_cast<uint32_t>(s.size()));
    update(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    return *this;
}

Hasher& Hasher::put_digest(const Digest& d)
{
    update(BytesView(d.bytes.data(), d.bytes.size()));
    return *this;
}

Digest sha256(BytesView data)
{
    Hasher h;
    h.update(data);
    return h.finalize();
}

Digest tagged_hash(std::string_view tag, BytesView payload)
{
    Hasher h;
    h.put_str(tag);
    h.update(payload);
    return h.finalize();
}

} // namespace rollup
