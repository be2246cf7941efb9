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

#include <pscreen/model.hpp>
#include <pscreen/trace.hpp>

#include <span>
#include <string>
#include <vector>

namespace pscreen {

enum class Outcome { Approve, Flag };

const char *to_string(Outcome o);

struct ScreeningDecision {
    double score = 0.0;
    double tau = 0.0;
    Outcome outcome = Outcome::Approve;
};

/// s(x) = -D(x) for a normalized trace of the critic's length.
double anomaly_score(const nn::CriticParams<float> &critic, const PowerTrace &normalized);

/// Scores of every normalized trace, in order.
std::vector<double> anomaly_scores(const nn::CriticParams<float> &critic,
                                   const TraceSet &normalized);

/// Sort ascending, k = floor(f * n); tau is the midpoint of the (n-k)-th and
/// (n-k+1)-th order statistics, so k distinct scores are >= tau. k = 0 gives
/// max + 1. Requires n >= 1 / f.
Threshold calibrate_threshold(std::span<const double> benign_scores, double target_fpr);

/// As above but rejects any score whose label is not benign.
Threshold calibrate_threshold(std::span<const double> scores,
                              std::span<const std::string> labels, double target_fpr);

/// Crops raw traces to the model's analysis window and normalizes them with
/// the enrollment statistics. Throws CorruptModelError if sigma <= 0.
TraceSet prepare(const TraceSet &raw, const Model &model);

/// Flag iff score >= tau.
ScreeningDecision decide(double score, const Threshold &tau);

ScreeningDecision screen(const PowerTrace &raw, const Model &model, const Threshold &tau);

std::vector<ScreeningDecision> batch_screen(const TraceSet &raw, const Model &model,
                                            const Threshold &tau);

/// `trace_id,score,tau,outcome`.
void write_decisions_csv(std::span<const ScreeningDecision> decisions, const std::string &path);

} // namespace pscreen
