// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rollup {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);

/// Decoding failure for canonical byte streams.
class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canonical encoding used everywhere a structure is hashed or put on the wire:
// fixed-width little-endian integers, byte strings with a u32 length prefix,
// fields in declaration order. Injective as long as every field is written
// through the writer (documented in docs/FORMATS.md).
class ByteWriter {
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }
    void put_u32(uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_u64(uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_raw(BytesView data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
    void put_bytes(BytesView data)
    {
        put_u32(static_cast<uint32_t>(data.size()));
        put_raw(data);
    }
    void put_str(std::string_view s)
    {
        put_u32(static_cast<uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(BytesView data) : data_(data) {}

    uint8_t get_u8()
    {
        need(1);
        return data_[pos_++];
    }
    uint32_t get_u32()
    {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    uint64_t get_u64()
    {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    Bytes get_bytes()
    {
        uint32_t n = get_u32();
        need(n);
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    std::string get_str()
    {
        Bytes b = get_bytes();
        return std::string(b.begin(), b.end());
    }

    bool exhausted() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }

private:
    void need(size_t n) const
    {
        if (data_.size() - pos_ < n)
            throw CodecError("byte stream truncated");
    }

    BytesView data_;
    size_t pos_ = 0;
};

} // namespace rollup
