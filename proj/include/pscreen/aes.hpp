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

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace pscreen {

using Block = std::array<std::uint8_t, 16>;
using AesKey = Block;

struct AesRun {
    Block ciphertext;
    /// State after the initial key addition (index 0) and after each of the
    /// ten rounds (indices 1..10). round_states[10] equals the ciphertext.
    std::array<Block, 11> round_states;
};

/// FIPS-197 AES-128 encryption of one block.
AesRun aes128_encrypt(const AesKey &key, const Block &plaintext);

constexpr int hamming_weight(std::uint8_t b) { return std::popcount(b); }

/// 32 hex digits to bytes; throws ConfigError on malformed input.
Block parse_hex_block(std::string_view hex);
std::string to_hex(const Block &b);

} // namespace pscreen
