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

#include <pscreen/pipeline.hpp>

#include <pscreen/scoring.hpp>

namespace pscreen {

Enrollment enroll(const TraceSet &raw_benign, const ToolkitConfig &cfg,
                  const nn::EpochCallback &on_epoch) {
    raw_benign.validate();
    if (!raw_benign.all_benign())
        throw LeakageError("enrollment data contains non-benign traces");
    if (raw_benign.empty())
        throw EmptyInputError("enrollment needs benign traces");

    const PreprocessConfig &pre = cfg.preprocess;
    // Split first so the normalization statistics see training traces only;
    // the validation scores then stand in for unseen benign devices.
    const Split<float> parts = split_train_val(raw_benign, pre.val_fraction, cfg.train.seed);
    const TraceSet train_cropped = crop(parts.train, pre.crop_start, pre.crop_end);
    const NormStats stats = compute_norm_stats(train_cropped);
    const TraceSet train_norm = normalize(train_cropped, stats);

    nn::TrainResult trained = nn::train(train_norm, cfg.train, on_epoch);

    Enrollment out;
    Model &m = out.model;
    m.generator = std::move(trained.generator);
    m.critic = std::move(trained.critic);
    m.norm = stats;
    m.preprocess = pre;
    m.raw_length = raw_benign.length();
    m.train = cfg.train;
    m.history = std::move(trained.log.epochs);
    for (auto &e : m.history)
        e.wall_seconds = 0.0;

    out.validation = parts.val;
    out.validation_scores = anomaly_scores(m.critic, prepare(parts.val, m));
    for (double f : cfg.target_fprs)
        m.thresholds.push_back(
            calibrate_threshold(out.validation_scores, parts.val.labels, f));
    return out;
}

TraceSet simulate_scenario(const ToolkitConfig &cfg, const std::string &scenario, Index n,
                           std::uint64_t first_index) {
    const auto payload = cfg.payload.make(scenario);
    if (!payload)
        throw ConfigError("unknown scenario '" + scenario + "'");
    return generate_dataset(cfg.sim, n, *payload, cfg.plaintext, first_index);
}

} // namespace pscreen
