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

#include <pscreen/config.hpp>

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

namespace pscreen {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T> T parse_number(const std::string &s) {
    T v{};
    const auto *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("invalid number '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string &s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_number<double>(trim(item)));
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

struct Key {
    std::string name;
    std::function<std::string(const ToolkitConfig &)> get;
    std::function<void(ToolkitConfig &, const std::string &)> set;
};

template <class T> Key int_key(std::string name, T ToolkitConfig::*section, Index T::*field) {
    return {std::move(name),
            [=](const ToolkitConfig &c) { return std::to_string((c.*section).*field); },
            [=](ToolkitConfig &c, const std::string &v) {
                (c.*section).*field = parse_number<Index>(v);
            }};
}

template <class T> Key real_key(std::string name, T ToolkitConfig::*section, double T::*field) {
    return {std::move(name), [=](const ToolkitConfig &c) { return fmt_double((c.*section).*field); },
            [=](ToolkitConfig &c, const std::string &v) {
                (c.*section).*field = parse_number<double>(v);
            }};
}

Key direct(std::string name, std::function<std::string(const ToolkitConfig &)> get,
           std::function<void(ToolkitConfig &, const std::string &)> set) {
    return {std::move(name), std::move(get), std::move(set)};
}

const std::vector<Key> &keys() {
    using C = ToolkitConfig;
    static const std::vector<Key> all = {
        int_key("sim.raw_len", &C::sim, &SimConfig::raw_len),
        int_key("sim.samples_per_op", &C::sim, &SimConfig::samples_per_op),
        int_key("sim.ct_samples_per_op", &C::sim, &SimConfig::ct_samples_per_op),
        int_key("sim.aes_start", &C::sim, &SimConfig::aes_start),
        real_key("sim.base_offset", &C::sim, &SimConfig::base_offset),
        real_key("sim.hw_gain", &C::sim, &SimConfig::hw_gain),
        real_key("sim.noise_sigma", &C::sim, &SimConfig::noise_sigma),
        direct(
            "sim.seed", [](const C &c) { return std::to_string(c.sim.seed); },
            [](C &c, const std::string &v) { c.sim.seed = parse_number<std::uint64_t>(v); }),
        direct(
            "sim.key", [](const C &c) { return to_hex(c.sim.key); },
            [](C &c, const std::string &v) { c.sim.key = parse_hex_block(v); }),
        direct(
            "sim.fixed_plaintext", [](const C &c) { return to_hex(c.sim.fixed_plaintext); },
            [](C &c, const std::string &v) { c.sim.fixed_plaintext = parse_hex_block(v); }),
        direct(
            "sim.plaintext_mode",
            [](const C &c) { return std::string(c.plaintext == PlaintextMode::Fixed ? "fixed" : "random"); },
            [](C &c, const std::string &v) {
                if (v == "fixed")
                    c.plaintext = PlaintextMode::Fixed;
                else if (v == "random")
                    c.plaintext = PlaintextMode::Random;
                else
                    throw ConfigError("plaintext mode must be fixed or random");
            }),
        direct(
            "sim.n_benign", [](const C &c) { return std::to_string(c.n_benign); },
            [](C &c, const std::string &v) { c.n_benign = parse_number<Index>(v); }),
        direct(
            "sim.n_scenario", [](const C &c) { return std::to_string(c.n_scenario); },
            [](C &c, const std::string &v) { c.n_scenario = parse_number<Index>(v); }),
        direct(
            "payload.trojan.trigger_byte",
            [](const C &c) { return std::to_string(c.payload.trojan.trigger_byte); },
            [](C &c, const std::string &v) {
                const auto b = parse_number<unsigned>(v);
                if (b > 255)
                    throw ConfigError("trigger byte must be 0..255");
                c.payload.trojan.trigger_byte = static_cast<std::uint8_t>(b);
            }),
        direct(
            "payload.trojan.trigger_rate",
            [](const C &c) { return fmt_double(c.payload.trojan.trigger_rate); },
            [](C &c, const std::string &v) { c.payload.trojan.trigger_rate = parse_number<double>(v); }),
        direct(
            "payload.trojan.amplitude",
            [](const C &c) { return fmt_double(c.payload.trojan.extra_amplitude); },
            [](C &c, const std::string &v) { c.payload.trojan.extra_amplitude = parse_number<double>(v); }),
        direct(
            "payload.trojan.length",
            [](const C &c) { return std::to_string(c.payload.trojan.extra_len); },
            [](C &c, const std::string &v) { c.payload.trojan.extra_len = parse_number<Index>(v); }),
        direct(
            "payload.bitflip.amplitude",
            [](const C &c) { return fmt_double(c.payload.bitflip.perturb_amplitude); },
            [](C &c, const std::string &v) { c.payload.bitflip.perturb_amplitude = parse_number<double>(v); }),
        direct(
            "payload.delay.amplitude", [](const C &c) { return fmt_double(c.payload.delay.amplitude); },
            [](C &c, const std::string &v) { c.payload.delay.amplitude = parse_number<double>(v); }),
        direct(
            "payload.delay.length", [](const C &c) { return std::to_string(c.payload.delay.length); },
            [](C &c, const std::string &v) { c.payload.delay.length = parse_number<Index>(v); }),
        int_key("preprocess.crop_start", &C::preprocess, &PreprocessConfig::crop_start),
        int_key("preprocess.crop_end", &C::preprocess, &PreprocessConfig::crop_end),
        real_key("preprocess.val_fraction", &C::preprocess, &PreprocessConfig::val_fraction),
        real_key("train.lambda_gp", &C::train, &nn::TrainConfig::lambda_gp),
        direct(
            "train.n_critic", [](const C &c) { return std::to_string(c.train.n_critic); },
            [](C &c, const std::string &v) { c.train.n_critic = parse_number<int>(v); }),
        real_key("train.lr", &C::train, &nn::TrainConfig::lr),
        real_key("train.beta1", &C::train, &nn::TrainConfig::beta1),
        real_key("train.beta2", &C::train, &nn::TrainConfig::beta2),
        direct(
            "train.epochs", [](const C &c) { return std::to_string(c.train.epochs); },
            [](C &c, const std::string &v) { c.train.epochs = parse_number<int>(v); }),
        int_key("train.batch", &C::train, &nn::TrainConfig::batch),
        int_key("train.latent_dim", &C::train, &nn::TrainConfig::latent_dim),
        direct(
            "train.seed", [](const C &c) { return std::to_string(c.train.seed); },
            [](C &c, const std::string &v) { c.train.seed = parse_number<std::uint64_t>(v); }),
        direct(
            "train.kernel", [](const C &c) { return std::to_string(c.train.geom.kernel); },
            [](C &c, const std::string &v) { c.train.geom.kernel = parse_number<Index>(v); }),
        direct(
            "train.stride", [](const C &c) { return std::to_string(c.train.geom.stride); },
            [](C &c, const std::string &v) { c.train.geom.stride = parse_number<Index>(v); }),
        direct(
            "train.padding", [](const C &c) { return std::to_string(c.train.geom.padding); },
            [](C &c, const std::string &v) { c.train.geom.padding = parse_number<Index>(v); }),
        real_key("train.leaky_slope", &C::train, &nn::TrainConfig::leaky_slope),
        direct(
            "calibrate.target_fprs",
            [](const C &c) {
                std::string s;
                for (std::size_t i = 0; i < c.target_fprs.size(); ++i)
                    s += (i ? "," : "") + fmt_double(c.target_fprs[i]);
                return s;
            },
            [](C &c, const std::string &v) { c.target_fprs = parse_list(v); }),
        direct(
            "paths.model", [](const C &c) { return c.paths.model; },
            [](C &c, const std::string &v) { c.paths.model = v; }),
        direct(
            "paths.eval_dir", [](const C &c) { return c.paths.eval_dir; },
            [](C &c, const std::string &v) { c.paths.eval_dir = v; }),
    };
    return all;
}

} // namespace

void ToolkitConfig::validate() const {
    pscreen::validate(sim);
    if (n_benign < 2 || n_scenario < 1)
        throw ConfigError("dataset sizes must be positive (at least two benign traces)");
    check_crop(sim.raw_len, preprocess.crop_start, preprocess.crop_end);
    if (!(preprocess.val_fraction > 0.0 && preprocess.val_fraction < 1.0))
        throw ConfigError("preprocess.val_fraction must lie in (0, 1)");
    train.validate();
    if (target_fprs.empty())
        throw ConfigError("calibrate.target_fprs must list at least one rate");
    for (double f : target_fprs)
        if (!(f > 0.0 && f <= 1.0))
            throw ConfigError("calibrate.target_fprs entries must lie in (0, 1]");
}

const std::vector<std::string> &profile_names() {
    static const std::vector<std::string> names = {"paper", "desk"};
    return names;
}

ToolkitConfig profile_config(std::string_view name) {
    ToolkitConfig c;
    if (name == "paper")
        return c;
    if (name == "desk") {
        c.sim.raw_len = 600;
        c.sim.samples_per_op = 1;
        c.sim.ct_samples_per_op = 1;
        c.sim.aes_start = 100;
        c.payload.trojan.extra_len = 24;
        c.payload.delay.length = 40;
        c.preprocess.crop_start = 96;
        c.preprocess.crop_end = 352;
        c.n_benign = 1000;
        c.n_scenario = 500;
        c.train.epochs = 80;
        c.train.batch = 64;
        return c;
    }
    throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper or desk)");
}

ToolkitConfig parse_config(std::string_view text, ToolkitConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        const auto &all = keys();
        const auto it = std::find_if(all.begin(), all.end(),
                                     [&](const Key &k) { return k.name == key; });
        if (it == all.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            it->set(base, value);
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
        }
    }
    return base;
}

std::string write_config(const ToolkitConfig &cfg) {
    std::string out;
    for (const auto &k : keys())
        out += k.name + " = " + k.get(cfg) + "\n";
    return out;
}

void apply_seed(ToolkitConfig &cfg, std::uint64_t seed) {
    cfg.sim.seed = seed;
    cfg.train.seed = seed;
}

} // namespace pscreen
