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

#include <pscreen/nn/wgan_gp.hpp>
#include <pscreen/sim.hpp>
#include <pscreen/trace.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pscreen {

struct Paths {
    std::string model = "model.pscm";
    std::string eval_dir = "eval";
};

/// Effective configuration of every command. Text form is one
/// `section.key = value` per line; `#` starts a comment.
struct ToolkitConfig {
    SimConfig sim;
    PayloadParams payload;
    PlaintextMode plaintext = PlaintextMode::Fixed;
    Index n_benign = 2000;
    Index n_scenario = 1000;
    PreprocessConfig preprocess;
    nn::TrainConfig train;
    std::vector<double> target_fprs = {0.01, 0.05};
    Paths paths;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/// `paper` (full-size numbers) or `desk` (laptop-scale). Throws ConfigError.
ToolkitConfig profile_config(std::string_view name);
const std::vector<std::string> &profile_names();

/// Applies `key = value` lines on top of `base`. Unknown keys and malformed
/// values throw ConfigError naming the line.
ToolkitConfig parse_config(std::string_view text, ToolkitConfig base);

/// Every key with its current value, in a stable order.
std::string write_config(const ToolkitConfig &cfg);

/// Overrides the simulator and training seeds.
void apply_seed(ToolkitConfig &cfg, std::uint64_t seed);

} // namespace pscreen
