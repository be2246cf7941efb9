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

#include <pscreen/metrics.hpp>

#include <pscreen/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pscreen {

namespace {

void check_scores(std::span<const double> s, const char *what) {
    if (s.empty())
        throw EmptyInputError(std::string(what) + " scores are empty");
    if (std::any_of(s.begin(), s.end(), [](double v) { return !std::isfinite(v); }))
        throw DataError(std::string(what) + " scores must be finite");
}

} // namespace

RocResult roc_auc(std::span<const double> benign, std::span<const double> tampered) {
    check_scores(benign, "benign");
    check_scores(tampered, "tampered");
    const std::size_t nb = benign.size();
    const std::size_t nt = tampered.size();

    // (score, is_tampered), ascending.
    std::vector<std::pair<double, bool>> all;
    all.reserve(nb + nt);
    for (double s : benign)
        all.emplace_back(s, false);
    for (double s : tampered)
        all.emplace_back(s, true);
    std::sort(all.begin(), all.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    // Midranks are multiples of 0.5, so the sum is exact.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        std::size_t tampered_in_group = 0;
        while (j < all.size() && all[j].first == all[i].first) {
            tampered_in_group += all[j].second ? 1 : 0;
            ++j;
        }
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        rank_sum += midrank * static_cast<double>(tampered_in_group);
        i = j;
    }
    const double u = rank_sum - 0.5 * static_cast<double>(nt) * static_cast<double>(nt + 1);

    RocResult r;
    r.auc = u / (static_cast<double>(nb) * static_cast<double>(nt));

    // Sweep thresholds from high to low; each distinct score adds one point.
    r.curve.push_back({0.0, 0.0});
    std::size_t fp = 0, tp = 0;
    for (std::size_t i = all.size(); i > 0;) {
        std::size_t j = i;
        while (j > 0 && all[j - 1].first == all[i - 1].first) {
            (all[j - 1].second ? tp : fp) += 1;
            --j;
        }
        r.curve.push_back({static_cast<double>(fp) / static_cast<double>(nb),
                           static_cast<double>(tp) / static_cast<double>(nt)});
        i = j;
    }
    return r;
}

TprAtFpr tpr_at_fpr(std::span<const double> benign, std::span<const double> tampered,
                    double target_fpr) {
    check_scores(tampered, "tampered");
    const Threshold t = calibrate_threshold(benign, target_fpr);
    const auto hits = std::count_if(tampered.begin(), tampered.end(),
                                    [&](double s) { return s >= t.tau; });
    return {static_cast<double>(hits) / static_cast<double>(tampered.size()), t.tau};
}

ConfusionMatrix confusion(std::span<const ScreeningDecision> decisions,
                          std::span<const std::string> labels) {
    if (decisions.size() != labels.size())
        throw DataError("confusion matrix needs one label per decision");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        const bool positive = labels[i] != kBenignLabel;
        const bool flagged = decisions[i].outcome == Outcome::Flag;
        if (positive)
            (flagged ? m.tp : m.fn) += 1;
        else
            (flagged ? m.fp : m.tn) += 1;
    }
    return m;
}

Histogram histogram(std::span<const double> scores, int n_bins, double lo, double hi) {
    if (n_bins < 1)
        throw ConfigError("histogram needs at least one bin");
    if (!(hi >= lo))
        throw ConfigError("histogram range is inverted");
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    const double width = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + width * i;
    h.edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double s : scores) {
        if (!(s >= lo && s <= hi))
            continue;
        int bin = width > 0.0 ? static_cast<int>((s - lo) / width) : 0;
        bin = std::clamp(bin, 0, n_bins - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

Histogram histogram(std::span<const double> scores, int n_bins) {
    if (scores.empty())
        return histogram(scores, n_bins, 0.0, 1.0);
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    return histogram(scores, n_bins, *lo, *hi);
}

std::vector<RankedTrace> rank_top_anomalies(std::span<const double> scores, Index k) {
    if (k < 0)
        throw ConfigError("cannot rank a negative number of traces");
    std::vector<RankedTrace> all;
    all.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        all.push_back({static_cast<Index>(i), scores[i]});
    std::stable_sort(all.begin(), all.end(),
                     [](const RankedTrace &a, const RankedTrace &b) { return a.score > b.score; });
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(k)));
    return all;
}

std::vector<RankedTrace> rank_top_anomalies(const TraceSet &raw, const Model &model, Index k) {
    const auto scores = anomaly_scores(model.critic, prepare(raw, model));
    return rank_top_anomalies(scores, k);
}

Eigen::MatrixXd pca_embed(const Eigen::MatrixXd &features, int dims) {
    const Index n = features.rows();
    const Index f = features.cols();
    if (n < 2)
        throw ShapeError("embedding needs at least two points, got " + std::to_string(n));
    if (dims < 1 || dims > f)
        throw ShapeError("cannot embed " + std::to_string(f) + " features into " +
                         std::to_string(dims) + " dimensions");

    const Eigen::MatrixXd centred = features.rowwise() - features.colwise().mean();
    const double scale = 1.0 / static_cast<double>(n - 1);
    // C v without forming C (F can be far larger than n).
    const auto cov_times = [&](const Eigen::VectorXd &v) -> Eigen::VectorXd {
        return scale * (centred.transpose() * (centred * v));
    };

    Eigen::MatrixXd components(f, dims);
    Eigen::VectorXd eigenvalues(dims);
    Stream stream(0x9ca5eedULL);
    for (int c = 0; c < dims; ++c) {
        const auto deflated = [&](const Eigen::VectorXd &v) -> Eigen::VectorXd {
            Eigen::VectorXd w = cov_times(v);
            for (int p = 0; p < c; ++p)
                w -= eigenvalues(p) * components.col(p) * components.col(p).dot(v);
            return w;
        };
        Eigen::VectorXd v(f);
        for (Index i = 0; i < f; ++i)
            v(i) = stream.normal();
        // Keeping every iterate orthogonal to the earlier components makes the
        // result well defined when the covariance is rank deficient.
        const auto orthogonalize = [&](Eigen::VectorXd &w) {
            for (int p = 0; p < c; ++p)
                w -= components.col(p) * components.col(p).dot(w);
        };
        orthogonalize(v);
        v.normalize();
        for (int it = 0; it < 20000; ++it) {
            Eigen::VectorXd w = deflated(v);
            orthogonalize(w);
            const double norm = w.norm();
            if (norm == 0.0)
                break;
            w /= norm;
            const double change = (w - v).norm();
            v = std::move(w);
            if (change < 1e-12)
                break;
        }
        const double lambda = v.dot(deflated(v));
        Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0)
            v = -v;
        components.col(c) = v;
        eigenvalues(c) = lambda;
    }
    return centred * components;
}

std::vector<ScenarioRow> scenario_report(
    std::span<const double> benign_val,
    const std::vector<std::pair<std::string, std::vector<double>>> &scenarios) {
    std::vector<ScenarioRow> rows;
    for (const auto &[name, scores] : scenarios) {
        ScenarioRow row;
        row.scenario = name;
        row.n = static_cast<Index>(scores.size());
        row.auc = roc_auc(benign_val, scores).auc;
        const auto at1 = tpr_at_fpr(benign_val, scores, 0.01);
        const auto at5 = tpr_at_fpr(benign_val, scores, 0.05);
        row.tpr_at_1 = at1.tpr;
        row.tau_at_1 = at1.tau;
        row.tpr_at_5 = at5.tpr;
        row.tau_at_5 = at5.tau;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ScenarioRow> scenario_report(
    const TraceSet &benign_val_raw, const std::vector<std::pair<std::string, TraceSet>> &scenarios,
    const Model &model) {
    const auto benign = anomaly_scores(model.critic, prepare(benign_val_raw, model));
    std::vector<std::pair<std::string, std::vector<double>>> scored;
    for (const auto &[name, set] : scenarios)
        scored.emplace_back(name, anomaly_scores(model.critic, prepare(set, model)));
    return scenario_report(benign, scored);
}

} // namespace pscreen
