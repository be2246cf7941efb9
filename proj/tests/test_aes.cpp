/*
 * SPDX-FileCopyrightText: Copyright 2026 The pscreen Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pscreen/aes.hpp>
#include <pscreen/rng.hpp>

#include "support.hpp"

#include "gtest/gtest.h"

using namespace pscreen;

TEST(Aes, Fips197AppendixC1) {
    const AesKey key = parse_hex_block("000102030405060708090a0b0c0d0e0f");
    const Block pt = parse_hex_block("00112233445566778899aabbccddeeff");
    const AesRun run = aes128_encrypt(key, pt);
    EXPECT_EQ(to_hex(run.ciphertext), "69c4e0d86a7b0430d8cdb78070b4c55a");
    EXPECT_EQ(run.round_states[10], run.ciphertext);
    // Initial AddRoundKey and the state after round 1 (FIPS-197 C.1 listing).
    EXPECT_EQ(to_hex(run.round_states[0]), "00102030405060708090a0b0c0d0e0f0");
    EXPECT_EQ(to_hex(run.round_states[1]), "89d810e8855ace682d1843d8cb128fe4");
}

TEST(Aes, Fips197AppendixB) {
    const AesRun run = aes128_encrypt(parse_hex_block("2b7e151628aed2a6abf7158809cf4f3c"),
                                      parse_hex_block("3243f6a8885a308d313198a2e0370734"));
    EXPECT_EQ(to_hex(run.ciphertext), "3925841d02dc09fbdc118597196a0b32");
}

TEST(Aes, MatchesOpenSslOnRandomPairs) {
    Stream st(2024);
    for (int i = 0; i < 1000; ++i) {
        AesKey key;
        Block pt;
        for (auto &b : key)
            b = static_cast<std::uint8_t>(st.below(256));
        for (auto &b : pt)
            b = static_cast<std::uint8_t>(st.below(256));
        ASSERT_EQ(aes128_encrypt(key, pt).ciphertext, pscreen::testing::openssl_aes128(key, pt))
            << "key " << to_hex(key) << " pt " << to_hex(pt);
    }
}

TEST(Aes, DeterministicAndAvalanche) {
    const AesKey key = parse_hex_block("2b7e151628aed2a6abf7158809cf4f3c");
    Block pt = parse_hex_block("3243f6a8885a308d313198a2e0370734");
    const AesRun a = aes128_encrypt(key, pt), b = aes128_encrypt(key, pt);
    EXPECT_EQ(a.ciphertext, b.ciphertext);
    EXPECT_EQ(a.round_states, b.round_states);
    pt[7] ^= 0x01;
    EXPECT_NE(aes128_encrypt(key, pt).ciphertext, a.ciphertext);
}

TEST(Aes, HammingWeight) {
    EXPECT_EQ(hamming_weight(0x00), 0);
    EXPECT_EQ(hamming_weight(0xff), 8);
    EXPECT_EQ(hamming_weight(0x42), 2);
}

TEST(Aes, HexParsing) {
    EXPECT_THROW(parse_hex_block("00"), ConfigError);
    EXPECT_THROW(parse_hex_block("zz0102030405060708090a0b0c0d0e0f"), ConfigError);
    EXPECT_EQ(to_hex(parse_hex_block("000102030405060708090A0B0C0D0E0F")),
              "000102030405060708090a0b0c0d0e0f");
}
