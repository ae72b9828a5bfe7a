// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rollup/bytes.hpp"
#include "rollup/sha256.hpp"

namespace rollup {

using AccountId = std::string;
using NamespaceId = std::string;

// Kind is kept as a raw byte: decoding never judges validity, so an unknown
// kind travels through commitments and is absorbed as a no-op by the state
// machine rather than rejected at parse time.
namespace tx_kind {
inline constexpr uint8_t kTransfer = 0;
inline constexpr uint8_t kMint = 1;
inline constexpr uint8_t kBurn = 2;
} // namespace tx_kind

struct Transaction {
    uint8_t kind = tx_kind::kTransfer;
    AccountId from;
    AccountId to; // unused for burn
    uint64_t amount = 0;
    uint64_t nonce = 0; // must equal the sender's current nonce
    NamespaceId rollup; // which rollup this transaction belongs to

    Bytes encode() const;
    static Transaction decode(ByteReader& reader); // throws CodecError
    static Transaction decode(BytesView bytes);    // requires full consumption

    Digest hash() const;
    bool operator==(const Transaction&) const = default;
};

using Ledger = std::vector<Transaction>;

} // namespace rollup
