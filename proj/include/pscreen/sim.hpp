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

#include <pscreen/aes.hpp>
#include <pscreen/trace.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pscreen {

/// Synthetic device-under-test. Power is modelled as a Hamming-weight leakage
/// of every AES round-state byte followed by a ciphertext-handling segment:
///
///   [0, aes_start)                          idle (base_offset)
///   [aes_start, aes_end)                    176 round-state bytes, samples_per_op each
///   [aes_end, ct_end)                       16 ciphertext bytes, ct_samples_per_op each
///   [ct_end, raw_len)                       idle
///
/// plus i.i.d. Gaussian noise. Tamper payloads add their effect on top.
struct SimConfig {
    Index raw_len = 3000;
    Index samples_per_op = 6;
    Index ct_samples_per_op = 6;
    Index aes_start = 520;
    double base_offset = 0.0335;
    double hw_gain = -0.032;
    double noise_sigma = 0.015;
    std::uint64_t seed = 1;
    AesKey key = {0x2b, 0x7e, 0x15, 0x16, 0x28, 0xae, 0xd2, 0xa6,
                  0xab, 0xf7, 0x15, 0x88, 0x09, 0xcf, 0x4f, 0x3c};
    /// Known-answer input of the screening workload.
    Block fixed_plaintext = {0x32, 0x43, 0xf6, 0xa8, 0x88, 0x5a, 0x30, 0x8d,
                             0x31, 0x31, 0x98, 0xa2, 0xe0, 0x37, 0x07, 0x34};
};

struct TraceLayout {
    Index aes_begin;
    Index aes_end;
    Index ct_begin;
    Index ct_end;
};

TraceLayout layout(const SimConfig &cfg);

/// Throws ConfigError if the activity span does not fit or noise is negative.
void validate(const SimConfig &cfg);

struct Benign {};

/// Extra key-dependent activity inserted right after the last AES round, fired
/// with probability trigger_rate or whenever pt[0] == trigger_byte. The
/// ciphertext segment and everything after it start extra_len samples later.
struct ConditionalTrojan {
    std::uint8_t trigger_byte = 0x42;
    double trigger_rate = 1.0;
    double extra_amplitude = 0.05;
    Index extra_len = 144;
};

/// One flipped ciphertext bit plus a small offset over the ciphertext segment.
struct BitFlip {
    double perturb_amplitude = 0.0075;
};

/// Elevated plateau after the ciphertext segment.
struct DelayLoop {
    double amplitude = 0.05;
    Index length = 240;
};

/// Never exercised by the profiled workload: identical to Benign.
struct Backdoor {};

/// All payloads of one tampered build at once.
struct Composite {
    ConditionalTrojan trojan;
    BitFlip bitflip;
    DelayLoop delay;
};

using Payload = std::variant<Benign, ConditionalTrojan, BitFlip, DelayLoop, Backdoor, Composite>;

/// Fixed scenario names: benign, trojan, bitflip, delay, backdoor, composite.
std::string scenario_name(const Payload &p);
const std::vector<std::string> &scenario_names();

/// Default-parameter payloads for each scenario, kept together so the config
/// layer can override them.
struct PayloadParams {
    ConditionalTrojan trojan;
    BitFlip bitflip;
    DelayLoop delay;

    /// Payload for a scenario name, or nullopt if the name is unknown.
    std::optional<Payload> make(std::string_view scenario) const;
};

/// Noiseless benign trace for the given plaintext.
Trace<double> leakage_template(const SimConfig &cfg, const Block &plaintext);

/// One trace; fully determined by (cfg, plaintext, payload, trace_index).
PowerTrace simulate_trace(const SimConfig &cfg, const Block &plaintext, const Payload &payload,
                          std::uint64_t trace_index);

enum class PlaintextMode { Fixed, Random };

/// Plaintext of trace `trace_index` under `mode`.
Block dataset_plaintext(const SimConfig &cfg, PlaintextMode mode, std::uint64_t trace_index);

/// n traces with indices first_index .. first_index + n - 1, labelled with the
/// scenario name.
TraceSet generate_dataset(const SimConfig &cfg, Index n, const Payload &payload,
                          PlaintextMode mode = PlaintextMode::Fixed,
                          std::uint64_t first_index = 0);

} // namespace pscreen
