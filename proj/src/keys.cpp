// SPDX-License-Identifier: Apache-2.0
#include "rollup/keys.hpp"

namespace rollup {

Signature sign(const Digest& key, BytesView message) {
    Hasher h;
    h.put_str("sig");
    h.put_digest(key);
    h.put_bytes(message);
    return Signature{h.finalize()};
}

bool verify_sig(const Digest& key, BytesView message, const Signature& sig) {
    return sign(key, message) == sig;
}

Digest derive_key(uint64_t seed, const std::string& owner) {
    Hasher h;
    h.put_str("keygen");
    h.put_u64(seed);
    h.put_str(owner);
    return h.finalize();
}

} // namespace rollup
