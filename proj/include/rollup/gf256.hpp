// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace rollup::gf256 {

// GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D) and
// generator alpha = 2. Addition is XOR; mul/div go through log tables.
uint8_t mul(uint8_t a, uint8_t b);
uint8_t inv(uint8_t a); // a != 0
uint8_t div(uint8_t a, uint8_t b); // b != 0

inline uint8_t add(uint8_t a, uint8_t b) { return a ^ b; }
inline uint8_t sub(uint8_t a, uint8_t b) { return a ^ b; }

} // namespace rollup::gf256
