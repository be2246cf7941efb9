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
#include <pscreen/scoring.hpp>

#include <Eigen/Core>

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pscreen {

struct RocPoint {
    double fpr;
    double tpr;
};

struct RocResult {
    double auc = 0.0;
    /// Nondecreasing in both coordinates, from (0, 0) to (1, 1).
    std::vector<RocPoint> curve;
};

/// AUC as the Mann-Whitney statistic P(tampered > benign) + 0.5 P(tie),
/// computed from tie-aware midranks, plus the empirical ROC curve.
RocResult roc_auc(std::span<const double> benign, std::span<const double> tampered);

struct TprAtFpr {
    double tpr = 0.0;
    double tau = 0.0;
};

/// tau from calibrate_threshold on the benign scores; tpr is the fraction of
/// tampered scores >= tau.
TprAtFpr tpr_at_fpr(std::span<const double> benign, std::span<const double> tampered,
                    double target_fpr);

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

/// Positives are traces whose label is not benign.
ConfusionMatrix confusion(std::span<const ScreeningDecision> decisions,
                          std::span<const std::string> labels);

struct Histogram {
    std::vector<double> edges; // n_bins + 1
    std::vector<long> counts;
};

/// Uniform bins over [lo, hi]; the last bin is closed. Values outside the
/// range are not counted.
Histogram histogram(std::span<const double> scores, int n_bins, double lo, double hi);

/// Range taken from the pooled min/max of the scores.
Histogram histogram(std::span<const double> scores, int n_bins = 50);

struct RankedTrace {
    Index trace_id;
    double score;
};

/// The k highest scores, descending; ties keep ascending trace_id.
std::vector<RankedTrace> rank_top_anomalies(std::span<const double> scores, Index k);

/// Scores raw traces with the model and ranks them.
std::vector<RankedTrace> rank_top_anomalies(const TraceSet &raw, const Model &model, Index k);

/// Mean-centred projection onto the leading eigenvectors of the sample
/// covariance, found by power iteration with deflation. Each component's
/// largest-magnitude loading is made positive. features is n x F, n >= 2.
Eigen::MatrixXd pca_embed(const Eigen::MatrixXd &features, int dims = 2);

struct ScenarioRow {
    std::string scenario;
    Index n = 0;
    double auc = 0.0;
    double tpr_at_1 = 0.0;
    double tpr_at_5 = 0.0;
    double tau_at_1 = 0.0;
    double tau_at_5 = 0.0;
};

/// One row per scenario: AUC against the benign validation scores and
/// TPR at 1% and 5% FPR.
std::vector<ScenarioRow> scenario_report(std::span<const double> benign_val,
                                         const std::vector<std::pair<std::string, std::vector<double>>> &scenarios);

/// Scores raw sets with the model first.
std::vector<ScenarioRow> scenario_report(const TraceSet &benign_val_raw,
                                         const std::vector<std::pair<std::string, TraceSet>> &scenarios,
                                         const Model &model);

} // namespace pscreen
