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

#include <pscreen/scoring.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pscreen {

const char *to_string(Outcome o) { return o == Outcome::Flag ? "flag" : "approve"; }

double anomaly_score(const nn::CriticParams<float> &critic, const PowerTrace &normalized) {
    TraceMatrix<float> row = normalized;
    return -static_cast<double>(nn::critic_scores(critic, row)(0));
}

std::vector<double> anomaly_scores(const nn::CriticParams<float> &critic,
                                   const TraceSet &normalized) {
    if (normalized.empty())
        return {};
    const auto d = nn::critic_scores(critic, normalized.samples);
    std::vector<double> s(static_cast<std::size_t>(d.size()));
    for (Index i = 0; i < d.size(); ++i)
        s[static_cast<std::size_t>(i)] = -static_cast<double>(d(i));
    return s;
}

Threshold calibrate_threshold(std::span<const double> benign_scores, double target_fpr) {
    if (!(target_fpr > 0.0 && target_fpr <= 1.0))
        throw ConfigError("target false-positive rate must lie in (0, 1]");
    const std::size_t n = benign_scores.size();
    if (std::any_of(benign_scores.begin(), benign_scores.end(),
                    [](double s) { return std::isnan(s); }))
        throw DataError("calibration scores contain NaN");
    if (static_cast<double>(n) * target_fpr < 1.0 - 1e-9)
        throw ResolutionError(std::to_string(n) + " calibration scores cannot resolve a " +
                              std::to_string(target_fpr) + " false-positive rate");
    if (std::any_of(benign_scores.begin(), benign_scores.end(),
                    [](double s) { return !std::isfinite(s); }))
        throw DataError("calibration scores must be finite");

    std::vector<double> sorted(benign_scores.begin(), benign_scores.end());
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(std::floor(target_fpr * static_cast<double>(n) + 1e-9));
    Threshold t;
    t.target_fpr = target_fpr;
    t.calibration_size = static_cast<Index>(n);
    if (k == 0)
        t.tau = sorted.back() + 1.0;
    else if (k >= n)
        t.tau = sorted.front();
    else
        t.tau = 0.5 * (sorted[n - k - 1] + sorted[n - k]);
    return t;
}

Threshold calibrate_threshold(std::span<const double> scores,
                              std::span<const std::string> labels, double target_fpr) {
    if (labels.size() != scores.size())
        throw DataError("calibration needs one label per score");
    for (const auto &l : labels)
        if (l != kBenignLabel)
            throw LeakageError("calibration scores include a '" + l + "' trace");
    return calibrate_threshold(scores, target_fpr);
}

TraceSet prepare(const TraceSet &raw, const Model &model) {
    if (!(model.norm.sigma > 0.0) || !std::isfinite(model.norm.mu))
        throw CorruptModelError("stored normalization sigma is not positive");
    if (raw.empty())
        return raw;
    if (raw.length() != model.raw_length)
        throw ShapeError("model expects raw traces of " + std::to_string(model.raw_length) +
                         " samples, got " + std::to_string(raw.length()));
    return normalize(crop(raw, model.preprocess.crop_start, model.preprocess.crop_end),
                     model.norm);
}

ScreeningDecision decide(double score, const Threshold &tau) {
    return {score, tau.tau, score >= tau.tau ? Outcome::Flag : Outcome::Approve};
}

ScreeningDecision screen(const PowerTrace &raw, const Model &model, const Threshold &tau) {
    TraceSet one;
    one.samples = raw;
    one.labels = {"unknown"};
    const TraceSet x = prepare(one, model);
    return decide(anomaly_score(model.critic, x.samples.row(0)), tau);
}

std::vector<ScreeningDecision> batch_screen(const TraceSet &raw, const Model &model,
                                            const Threshold &tau) {
    const auto scores = anomaly_scores(model.critic, prepare(raw, model));
    std::vector<ScreeningDecision> out;
    out.reserve(scores.size());
    for (double s : scores)
        out.push_back(decide(s, tau));
    return out;
}

void write_decisions_csv(std::span<const ScreeningDecision> decisions, const std::string &path) {
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw FormatError(FormatErrc::Io, "cannot open " + path + " for writing");
    std::fputs("trace_id,score,tau,outcome\n", f);
    for (std::size_t i = 0; i < decisions.size(); ++i)
        std::fprintf(f, "%zu,%.9g,%.9g,%s\n", i, decisions[i].score, decisions[i].tau,
                     to_string(decisions[i].outcome));
    std::fclose(f);
}

} // namespace pscreen
