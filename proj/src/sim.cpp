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

#include <pscreen/sim.hpp>

#include <pscreen/errors.hpp>
#include <pscreen/rng.hpp>

#include <cmath>
#include <sstream>

namespace pscreen {

namespace {

constexpr Index kRoundStateOps = 11 * 16;
constexpr Index kCiphertextOps = 16;
constexpr std::uint64_t kPlaintextStream = 0x706c61696e746578ULL;
constexpr const char *kSimulatorVersion = "1";

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_positive(double v, const char *what) {
    if (!(std::isfinite(v) && v > 0.0))
        throw ConfigError(std::string(what) + " must be finite and positive");
}

void check_span(const SimConfig &cfg, Index begin, Index len, const char *what) {
    if (len <= 0)
        throw ConfigError(std::string(what) + " length must be positive");
    if (begin + len > cfg.raw_len)
        throw ConfigError(std::string(what) + " segment [" + std::to_string(begin) + ", " +
                          std::to_string(begin + len) + ") exceeds raw length " +
                          std::to_string(cfg.raw_len));
}

void validate_payload(const SimConfig &cfg, const Payload &payload) {
    const TraceLayout lay = layout(cfg);
    const auto trojan = [&](const ConditionalTrojan &t) {
        if (!(t.trigger_rate >= 0.0 && t.trigger_rate <= 1.0))
            throw ConfigError("trojan trigger rate must lie in [0, 1]");
        check_positive(t.extra_amplitude, "trojan amplitude");
        // The burst is inserted, so the ciphertext segment moves back by its length.
        check_span(cfg, lay.aes_end, t.extra_len + (lay.ct_end - lay.ct_begin),
                   "trojan burst and delayed ciphertext");
    };
    const auto bitflip = [&](const BitFlip &b) {
        check_positive(b.perturb_amplitude, "bit-flip amplitude");
    };
    const auto delay = [&](const DelayLoop &d) {
        check_positive(d.amplitude, "delay amplitude");
        check_span(cfg, lay.ct_end, d.length, "delay plateau");
    };
    std::visit(overloaded{[](const Benign &) {}, [](const Backdoor &) {}, trojan, bitflip, delay,
                          [&](const Composite &c) {
                              trojan(c.trojan);
                              bitflip(c.bitflip);
                              delay(c.delay);
                              check_span(cfg, lay.ct_end + c.trojan.extra_len, c.delay.length,
                                         "delay plateau after the trojan burst");
                          }},
               payload);
}

// Per-trace draws that every payload consumes, so matched indices share noise.
struct TraceDraws {
    double trigger_u;
    int flipped_bit;
};

bool trojan_fires(const Block &pt, const ConditionalTrojan &p, const TraceDraws &d) {
    return d.trigger_u < p.trigger_rate || pt[0] == p.trigger_byte;
}

// Key-dependent burst occupying [begin, begin + extra_len).
void add_trojan_burst(Trace<double> &t, const SimConfig &cfg, Index begin,
                      const ConditionalTrojan &p) {
    for (Index j = 0; j < p.extra_len; ++j) {
        const auto key_byte = cfg.key[static_cast<std::size_t>((j / cfg.samples_per_op) % 16)];
        t[begin + j] += p.extra_amplitude * (0.5 + hamming_weight(key_byte) / 16.0);
    }
}

// Benign template with the ciphertext segment starting `shift` samples late.
void fill_template(Trace<double> &t, const SimConfig &cfg, const AesRun &run,
                   const Block &ciphertext, Index shift = 0) {
    const TraceLayout lay = layout(cfg);
    t.setConstant(cfg.raw_len, cfg.base_offset);
    Index pos = lay.aes_begin;
    for (const Block &state : run.round_states)
        for (const auto b : state) {
            t.segment(pos, cfg.samples_per_op).array() += cfg.hw_gain * hamming_weight(b);
            pos += cfg.samples_per_op;
        }
    pos += shift;
    for (const auto b : ciphertext) {
        t.segment(pos, cfg.ct_samples_per_op).array() += cfg.hw_gain * hamming_weight(b);
        pos += cfg.ct_samples_per_op;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void describe(std::map<std::string, std::string> &meta, const Payload &payload) {
    const auto trojan = [&](const ConditionalTrojan &p) {
        meta["payload.trojan.trigger_byte"] = std::to_string(p.trigger_byte);
        meta["payload.trojan.trigger_rate"] = fmt(p.trigger_rate);
        meta["payload.trojan.amplitude"] = fmt(p.extra_amplitude);
        meta["payload.trojan.length"] = std::to_string(p.extra_len);
    };
    const auto bitflip = [&](const BitFlip &p) {
        meta["payload.bitflip.amplitude"] = fmt(p.perturb_amplitude);
    };
    const auto delay = [&](const DelayLoop &p) {
        meta["payload.delay.amplitude"] = fmt(p.amplitude);
        meta["payload.delay.length"] = std::to_string(p.length);
    };
    std::visit(overloaded{[](const Benign &) {}, [](const Backdoor &) {}, trojan, bitflip, delay,
                          [&](const Composite &c) {
                              trojan(c.trojan);
                              bitflip(c.bitflip);
                              delay(c.delay);
                          }},
               payload);
}

} // namespace

TraceLayout layout(const SimConfig &cfg) {
    const Index aes_end = cfg.aes_start + kRoundStateOps * cfg.samples_per_op;
    return {cfg.aes_start, aes_end, aes_end, aes_end + kCiphertextOps * cfg.ct_samples_per_op};
}

void validate(const SimConfig &cfg) {
    if (cfg.samples_per_op <= 0 || cfg.ct_samples_per_op <= 0)
        throw ConfigError("samples per operation must be positive");
    if (cfg.aes_start < 0)
        throw ConfigError("AES start must be non-negative");
    if (cfg.raw_len < layout(cfg).ct_end)
        throw ConfigError("raw length " + std::to_string(cfg.raw_len) +
                          " is shorter than the AES activity span ending at " +
                          std::to_string(layout(cfg).ct_end));
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
        throw ConfigError("noise sigma must be finite and non-negative");
    if (!std::isfinite(cfg.base_offset) || !std::isfinite(cfg.hw_gain))
        throw ConfigError("offset and gain must be finite");
}

std::string scenario_name(const Payload &p) {
    return std::visit(overloaded{[](const Benign &) { return "benign"; },
                                 [](const ConditionalTrojan &) { return "trojan"; },
                                 [](const BitFlip &) { return "bitflip"; },
                                 [](const DelayLoop &) { return "delay"; },
                                 [](const Backdoor &) { return "backdoor"; },
                                 [](const Composite &) { return "composite"; }},
                      p);
}

const std::vector<std::string> &scenario_names() {
    static const std::vector<std::string> names = {"benign", "trojan",   "bitflip",
                                                   "delay",  "backdoor", "composite"};
    return names;
}

std::optional<Payload> PayloadParams::make(std::string_view scenario) const {
    if (scenario == "benign")
        return Benign{};
    if (scenario == "trojan")
        return trojan;
    if (scenario == "bitflip")
        return bitflip;
    if (scenario == "delay")
        return delay;
    if (scenario == "backdoor")
        return Backdoor{};
    if (scenario == "composite")
        return Composite{trojan, bitflip, delay};
    return std::nullopt;
}

Trace<double> leakage_template(const SimConfig &cfg, const Block &plaintext) {
    validate(cfg);
    const AesRun run = aes128_encrypt(cfg.key, plaintext);
    Trace<double> t;
    fill_template(t, cfg, run, run.ciphertext);
    return t;
}

PowerTrace simulate_trace(const SimConfig &cfg, const Block &plaintext, const Payload &payload,
                          std::uint64_t trace_index) {
    validate(cfg);
    validate_payload(cfg, payload);

    Stream stream(cfg.seed, trace_index);
    const TraceDraws draws{stream.uniform(), static_cast<int>(stream.below(128))};

    const AesRun run = aes128_encrypt(cfg.key, plaintext);
    Block ciphertext = run.ciphertext;
    const bool flips = std::holds_alternative<BitFlip>(payload) ||
                       std::holds_alternative<Composite>(payload);
    if (flips)
        ciphertext[static_cast<std::size_t>(draws.flipped_bit / 8)] ^=
            static_cast<std::uint8_t>(1u << (draws.flipped_bit % 8));

    // A firing trojan is inserted after the last round, so everything from
    // the ciphertext segment on happens extra_len samples later.
    const ConditionalTrojan *trojan = nullptr;
    if (const auto *p = std::get_if<ConditionalTrojan>(&payload))
        trojan = p;
    else if (const auto *c = std::get_if<Composite>(&payload))
        trojan = &c->trojan;
    const bool fires = trojan != nullptr && trojan_fires(plaintext, *trojan, draws);
    const Index shift = fires ? trojan->extra_len : 0;

    Trace<double> t;
    fill_template(t, cfg, run, ciphertext, shift);

    const TraceLayout lay = layout(cfg);
    if (fires)
        add_trojan_burst(t, cfg, lay.aes_end, *trojan);
    const auto bitflip = [&](const BitFlip &p) {
        t.segment(lay.ct_begin + shift, lay.ct_end - lay.ct_begin).array() += p.perturb_amplitude;
    };
    const auto delay = [&](const DelayLoop &p) {
        t.segment(lay.ct_end + shift, p.length).array() += p.amplitude;
    };
    std::visit(overloaded{[](const Benign &) {}, [](const Backdoor &) {},
                          [](const ConditionalTrojan &) {}, bitflip, delay,
                          [&](const Composite &c) {
                              bitflip(c.bitflip);
                              delay(c.delay);
                          }},
               payload);

    for (Index i = 0; i < t.size(); ++i)
        t[i] += cfg.noise_sigma * stream.normal();
    return t.cast<float>();
}

Block dataset_plaintext(const SimConfig &cfg, PlaintextMode mode, std::uint64_t trace_index) {
    if (mode == PlaintextMode::Fixed)
        return cfg.fixed_plaintext;
    Stream stream(substream_seed(cfg.seed, kPlaintextStream), trace_index);
    Block pt{};
    for (std::size_t i = 0; i < 16; i += 8) {
        const std::uint64_t v = stream.next_u64();
        for (std::size_t j = 0; j < 8; ++j)
            pt[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
    return pt;
}

TraceSet generate_dataset(const SimConfig &cfg, Index n, const Payload &payload,
                          PlaintextMode mode, std::uint64_t first_index) {
    if (n <= 0)
        throw EmptyInputError("dataset request for zero traces");
    validate(cfg);
    validate_payload(cfg, payload);

    TraceSet set;
    set.samples.resize(n, cfg.raw_len);
    const std::string name = scenario_name(payload);
    set.labels.assign(static_cast<std::size_t>(n), name);
    for (Index i = 0; i < n; ++i) {
        const std::uint64_t index = first_index + static_cast<std::uint64_t>(i);
        set.samples.row(i) = simulate_trace(cfg, dataset_plaintext(cfg, mode, index), payload, index);
    }

    auto &meta = set.meta;
    meta["scenario"] = name;
    meta["simulator_version"] = kSimulatorVersion;
    meta["sim.seed"] = std::to_string(cfg.seed);
    meta["sim.raw_len"] = std::to_string(cfg.raw_len);
    meta["sim.samples_per_op"] = std::to_string(cfg.samples_per_op);
    meta["sim.ct_samples_per_op"] = std::to_string(cfg.ct_samples_per_op);
    meta["sim.aes_start"] = std::to_string(cfg.aes_start);
    meta["sim.base_offset"] = fmt(cfg.base_offset);
    meta["sim.hw_gain"] = fmt(cfg.hw_gain);
    meta["sim.noise_sigma"] = fmt(cfg.noise_sigma);
    meta["sim.key"] = to_hex(cfg.key);
    meta["plaintext_mode"] = mode == PlaintextMode::Fixed ? "fixed" : "random";
    meta["first_index"] = std::to_string(first_index);
    describe(meta, payload);
    return set;
}

} // namespace pscreen
