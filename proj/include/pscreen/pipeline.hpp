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

#include <pscreen/config.hpp>
#include <pscreen/model.hpp>
#include <pscreen/nn/wgan_gp.hpp>
#include <pscreen/trace.hpp>

#include <string>
#include <utility>
#include <vector>

namespace pscreen {

struct Enrollment {
    Model model;
    /// Held-out benign traces, raw (uncropped), used for calibration.
    TraceSet validation;
    /// Validation scores, in validation order.
    std::vector<double> validation_scores;
};

/// Crop, compute statistics, normalize, split, train and calibrate one
/// threshold per target FPR. Rejects any non-benign trace before touching the
/// data.
Enrollment enroll(const TraceSet &raw_benign, const ToolkitConfig &cfg,
                  const nn::EpochCallback &on_epoch = {});

/// n traces of a named scenario from the configured simulator, with trace
/// indices first_index onwards. Throws ConfigError for an unknown name.
TraceSet simulate_scenario(const ToolkitConfig &cfg, const std::string &scenario, Index n,
                           std::uint64_t first_index = 0);

} // namespace pscreen
