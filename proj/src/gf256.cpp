// SPDX-License-Identifier: Apache-2.0
#include "rollup/gf256.hpp"

#include "rollup/error.hpp"

namespace rollup::gf256 {

namespace {

struct Tables {
    uint8_t exp[512];
    uint8_t log[256];

    Tables() {
        uint16_t x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<uint8_t>(x);
            log[x] = static_cast<uint8_t>(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
        log[0] = 0; // never read: mul/div guard zero operands
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace

uint8_t mul(uint8_t a, uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[t.log[a] + t.log[b]];
}

uint8_t inv(uint8_t a) {
    if (a == 0) throw Error(Errc::BadConfig, "gf256: inverse of zero");
    const Tables& t = tables();
    return t.exp[255 - t.log[a]];
}

uint8_t div(uint8_t a, uint8_t b) {
    if (b == 0) throw Error(Errc::BadConfig, "gf256: division by zero");
    if (a == 0) return 0;
    const Tables& t = tables();
    return t.exp[t.log[a] + 255 - t.log[b]];
}

} // namespace rollup::gf256
