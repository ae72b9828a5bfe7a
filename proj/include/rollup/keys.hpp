// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "rollup/bytes.hpp"
#include "rollup/sha256.hpp"

namespace rollup {

using ValidatorId = std::string;

// Signatures are keyed hashes: sig = H(key, message). Unforgeability holds
// in-model because honest keys never leave their owner; the key doubles as
// the verification key and is published after a run so verdict evidence can
// be re-checked offline by anyone holding the key file.
struct Signature {
    Digest mac;
    bool operator==(const Signature&) const = default;
};

Signature sign(const Digest& key, BytesView message);
bool verify_sig(const Digest& key, BytesView message, const Signature& sig);

/// Stable per-identity key derivation for simulations.
Digest derive_key(uint64_t seed, const std::string& owner);

} // namespace rollup
