// SPDX-License-Identifier: Apache-2.0
#include "rollup/tx.hpp"

namespace rollup {

Bytes Transaction::encode() const {
    ByteWriter w;
    w.put_u8(kind);
    w.put_str(from);
    w.put_str(to);
    w.put_u64(amount);
    w.put_u64(nonce);
    w.put_str(rollup);
    return w.take();
}

Transaction Transaction::decode(ByteReader& reader) {
    Transaction tx;
    tx.kind = reader.get_u8();
    tx.from = reader.get_str();
    tx.to = reader.get_str();
    tx.amount = reader.get_u64();
    tx.nonce = reader.get_u64();
    tx.rollup = reader.get_str();
    return tx;
}

Transaction Transaction::decode(BytesView bytes) {
    ByteReader reader(bytes);
    Transaction tx = decode(reader);
    if (!reader.exhausted()) throw CodecError("transaction: trailing bytes");
    return tx;
}

Digest Transaction::hash() const {
    return tagged_hash("tx", encode());
}

} // namespace rollup
