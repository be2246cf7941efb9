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

#include "support.hpp"

#include "gtest/gtest.h"

#include <Eigen/QR>

#include <cmath>

using namespace pscreen;
using pscreen::testing::brute_force_auc;
using pscreen::testing::dense_pca;

namespace {

std::vector<double> draw(Stream &st, std::size_t n, int levels) {
    std::vector<double> v(n);
    for (auto &x : v)
        x = levels > 0 ? static_cast<double>(st.below(static_cast<std::uint64_t>(levels))) : st.normal();
    return v;
}

} // namespace

TEST(RocAuc, PerfectSeparation) {
    const std::vector<double> b{0.1, 0.2, 0.3}, t{1.0, 2.0};
    EXPECT_EQ(roc_auc(b, t).auc, 1.0);
    EXPECT_EQ(roc_auc(t, b).auc, 0.0);
}

TEST(RocAuc, IdenticalMultisetsGiveHalf) {
    const std::vector<double> s{3, 1, 2, 2, 5};
    EXPECT_EQ(roc_auc(s, s).auc, 0.5);
}

TEST(RocAuc, FiveSixths) {
    const std::vector<double> b{1, 2, 3}, t{2.5, 4};
    EXPECT_DOUBLE_EQ(roc_auc(b, t).auc, 5.0 / 6.0);
}

TEST(RocAuc, MatchesBruteForceProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Stream st(seed, 1);
        const int levels = seed % 2 == 0 ? 6 : 0; // half the instances are tie-heavy
        const auto b = draw(st, 1 + st.below(30), levels);
        const auto t = draw(st, 1 + st.below(30), levels);
        ASSERT_EQ(roc_auc(b, t).auc, brute_force_auc(b, t)) << "seed " << seed;
    }
}

TEST(RocAuc, SwappingRolesComplements) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Stream st(seed, 2);
        const auto b = draw(st, 17, 5), t = draw(st, 23, 5);
        ASSERT_NEAR(roc_auc(b, t).auc + roc_auc(t, b).auc, 1.0, 1e-15);
    }
}

TEST(RocAuc, InvariantUnderIncreasingTransform) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Stream st(seed, 3);
        auto b = draw(st, 40, 0), t = draw(st, 40, 0);
        const double auc = roc_auc(b, t).auc;
        for (auto *v : {&b, &t})
            for (auto &x : *v)
                x = std::exp(2.0 * x) + 7.0;
        ASSERT_EQ(roc_auc(b, t).auc, auc);
    }
}

TEST(RocAuc, CurveIsMonotoneFromOriginToOne) {
    Stream st(4);
    const auto b = draw(st, 50, 7), t = draw(st, 60, 7);
    const auto curve = roc_auc(b, t).curve;
    ASSERT_GE(curve.size(), 2u);
    EXPECT_EQ(curve.front().fpr, 0.0);
    EXPECT_EQ(curve.front().tpr, 0.0);
    EXPECT_EQ(curve.back().fpr, 1.0);
    EXPECT_EQ(curve.back().tpr, 1.0);
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_GE(curve[i].fpr, curve[i - 1].fpr);
        EXPECT_GE(curve[i].tpr, curve[i - 1].tpr);
        area += (curve[i].fpr - curve[i - 1].fpr) * 0.5 * (curve[i].tpr + curve[i - 1].tpr);
    }
    EXPECT_NEAR(area, roc_auc(b, t).auc, 1e-12); // trapezoids equal the rank statistic
}

TEST(RocAuc, RejectsEmptyAndNonFinite) {
    const std::vector<double> ok{1.0}, empty, bad{std::nan("")};
    EXPECT_THROW(roc_auc(empty, ok), EmptyInputError);
    EXPECT_THROW(roc_auc(ok, empty), EmptyInputError);
    EXPECT_THROW(roc_auc(ok, bad), DataError);
}

TEST(TprAtFpr, UsesCalibratedThreshold) {
    std::vector<double> b(100);
    for (int i = 0; i < 100; ++i)
        b[i] = i + 1;
    const std::vector<double> t{95.0, 96.0, 99.7, 200.0};
    const auto r = tpr_at_fpr(b, t, 0.05);
    EXPECT_EQ(r.tau, 95.5);
    EXPECT_EQ(r.tpr, 0.75);
    EXPECT_EQ(tpr_at_fpr(b, t, 0.01).tpr, 0.5);
}

TEST(Confusion, CountsEachCell) {
    const std::vector<ScreeningDecision> d{{1, 0, Outcome::Flag},
                                           {1, 0, Outcome::Flag},
                                           {0, 0, Outcome::Approve},
                                           {0, 0, Outcome::Approve},
                                           {0, 0, Outcome::Approve}};
    const std::vector<std::string> labels{"trojan", kBenignLabel, kBenignLabel, "delay", "delay"};
    const ConfusionMatrix m = confusion(d, labels);
    EXPECT_EQ(m.tp, 1);
    EXPECT_EQ(m.fp, 1);
    EXPECT_EQ(m.tn, 1);
    EXPECT_EQ(m.fn, 2);
    EXPECT_THROW(confusion(d, std::span(labels).first(3)), DataError);
}

TEST(Histogram, FixedRange) {
    const std::vector<double> s{0.0, 0.5, 1.0, 1.5, 2.0, -1.0, 3.0};
    const Histogram h = histogram(s, 2, 0.0, 2.0);
    EXPECT_EQ(h.edges, (std::vector<double>{0.0, 1.0, 2.0}));
    EXPECT_EQ(h.counts, (std::vector<long>{2, 3})); // last bin closed, outliers dropped
    EXPECT_THROW(histogram(s, 0, 0.0, 1.0), ConfigError);
    EXPECT_THROW(histogram(s, 3, 1.0, 0.0), ConfigError);
}

TEST(Histogram, PooledRangeCountsEverything) {
    Stream st(5);
    const auto s = draw(st, 1000, 0);
    const Histogram h = histogram(s, 37);
    EXPECT_EQ(h.counts.size(), 37u);
    EXPECT_EQ(h.edges.size(), 38u);
    long total = 0;
    for (long c : h.counts)
        total += c;
    EXPECT_EQ(total, 1000);
    EXPECT_EQ(h.edges.front(), *std::min_element(s.begin(), s.end()));
    EXPECT_EQ(h.edges.back(), *std::max_element(s.begin(), s.end()));
}

TEST(RankTopAnomalies, DescendingWithStableTies) {
    const std::vector<double> s{0.1, 0.9, 0.5, 0.9, -2.0};
    const auto r = rank_top_anomalies(s, 3);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].trace_id, 1);
    EXPECT_EQ(r[1].trace_id, 3);
    EXPECT_EQ(r[2].trace_id, 2);
    EXPECT_EQ(r[2].score, 0.5);
    EXPECT_EQ(rank_top_anomalies(s, 10).size(), 5u);
    EXPECT_TRUE(rank_top_anomalies(s, 0).empty());
    EXPECT_THROW(rank_top_anomalies(s, -1), ConfigError);
}

TEST(PcaEmbed, MatchesDenseEigendecompositionProperty) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Stream st(seed, 6);
        const Index n = 30 + static_cast<Index>(st.below(30)), f = 3 + static_cast<Index>(st.below(6));
        Eigen::MatrixXd x(n, f);
        for (Index j = 0; j < f; ++j) {
            const double scale = 4.0 / static_cast<double>(j + 1); // well-separated spectrum
            for (Index i = 0; i < n; ++i)
                x(i, j) = scale * st.normal() + 3.0;
        }
        // Rotate so the principal axes are not the coordinate axes.
        Eigen::MatrixXd q(f, f);
        for (Index i = 0; i < q.size(); ++i)
            q(i) = st.normal();
        x = x * Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ();
        const Eigen::MatrixXd got = pca_embed(x, 2), want = dense_pca(x, 2);
        ASSERT_LT((got - want).cwiseAbs().maxCoeff(), 1e-8) << "seed " << seed;
    }
}

TEST(PcaEmbed, CollinearPointsEmbedOnALine) {
    Eigen::MatrixXd x(10, 4);
    const Eigen::RowVector4d dir(1.0, -2.0, 0.5, 3.0);
    for (Index i = 0; i < 10; ++i)
        x.row(i) = static_cast<double>(i) * dir + Eigen::RowVector4d(5, 5, 5, 5);
    const Eigen::MatrixXd e = pca_embed(x, 2);
    ASSERT_TRUE(e.allFinite());
    EXPECT_LT(e.col(1).cwiseAbs().maxCoeff(), 1e-8);
    for (Index i = 1; i < 10; ++i)
        EXPECT_NEAR(std::abs(e(i, 0) - e(i - 1, 0)), dir.norm(), 1e-9);
}

TEST(PcaEmbed, ShapeErrors) {
    EXPECT_THROW(pca_embed(Eigen::MatrixXd::Zero(1, 3), 2), ShapeError);
    EXPECT_THROW(pca_embed(Eigen::MatrixXd::Zero(5, 1), 2), ShapeError);
}

TEST(ScenarioReport, OneRowPerScenario) {
    std::vector<double> b(100);
    for (int i = 0; i < 100; ++i)
        b[i] = i;
    const auto rows = scenario_report(b, {{"high", std::vector<double>(10, 1000.0)},
                                          {"same", b}});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].scenario, "high");
    EXPECT_EQ(rows[0].n, 10);
    EXPECT_EQ(rows[0].auc, 1.0);
    EXPECT_EQ(rows[0].tpr_at_1, 1.0);
    EXPECT_EQ(rows[0].tpr_at_5, 1.0);
    EXPECT_EQ(rows[1].auc, 0.5);
    EXPECT_EQ(rows[1].tpr_at_5, 0.05);
}
