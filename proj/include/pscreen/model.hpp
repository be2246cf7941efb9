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
#include <pscreen/trace.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pscreen {

/// Decision threshold calibrated on benign validation scores.
struct Threshold {
    double tau = 0.0;
    double target_fpr = 0.0;
    Index calibration_size = 0;
};

/// Everything needed to screen a raw trace: both networks, the enrollment
/// preprocessing, normalization statistics and calibrated thresholds.
struct Model {
    nn::GeneratorParams<float> generator;
    nn::CriticParams<float> critic;
    NormStats norm;
    PreprocessConfig preprocess;
    Index raw_length = 0;
    std::vector<Threshold> thresholds;
    nn::TrainConfig train;
    /// Per-epoch losses; wall times are not stored so files stay reproducible.
    std::vector<nn::EpochLog> history;

    /// Threshold calibrated for `target_fpr`, or nullptr.
    const Threshold *threshold_for(double target_fpr) const;
};

// PSCM container, little-endian:
//   "PSCM" | u16 version=1 | u32 manifest_len | manifest JSON |
//   float32 tensor blobs in manifest order, each column-major.

inline constexpr std::uint16_t kModelFormatVersion = 1;

std::vector<char> encode_model(const Model &model);
Model decode_model(std::span<const char> bytes);

void save_model(const std::string &path, const Model &model);
Model load_model(const std::string &path);

} // namespace pscreen
