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

#include <pscreen/report.hpp>

#include "support.hpp"

#include "gtest/gtest.h"

using namespace pscreen;
using pscreen::testing::scratch_dir;
using pscreen::testing::slurp;

namespace {

Model small_model() {
    Model m;
    m.train.latent_dim = 4;
    m.train.geom = {5, 2, 2};
    Stream st(1);
    m.generator = nn::GeneratorParams<float>::init({4, 8, 8, 32}, st);
    m.critic = nn::CriticParams<float>::init({32, {4, 4, 4}, {5, 2, 2}, 0.2}, st);
    m.norm = {0.0, 1.0};
    m.preprocess = {4, 36, 0.2};
    m.raw_length = 40;
    m.history = {{0.5, -0.25, 0.125, 0.0}, {0.25, -0.125, 0.0625, 0.0}};
    return m;
}

TraceSet random_set(Index n, const std::string &label, double offset, std::uint64_t seed) {
    Stream st(seed);
    TraceSet s{TraceMatrix<float>(n, 40), std::vector<std::string>(n, label), {}};
    for (Index i = 0; i < s.samples.size(); ++i)
        s.samples.data()[i] = static_cast<float>(offset + st.normal());
    return s;
}

struct Fixture {
    Model model = small_model();
    TraceSet val = random_set(100, kBenignLabel, 0.0, 2);
    std::vector<std::pair<std::string, TraceSet>> sets{{"shifted", random_set(60, "shifted", 3.0, 3)},
                                                       {"same", random_set(50, "same", 0.0, 4)}};
    Fixture() {
        const auto s = anomaly_scores(model.critic, prepare(val, model));
        for (double f : {0.01, 0.05})
            model.thresholds.push_back(calibrate_threshold(s, f));
    }
};

EvalOptions small_options() {
    EvalOptions o;
    o.hist_bins = 8;
    o.top_k = 3;
    o.embed_per_set = 20;
    return o;
}

} // namespace

TEST(Evaluate, BuildsEveryTable) {
    Fixture f;
    const Evaluation ev = evaluate(f.model, f.val, f.sets, small_options());
    ASSERT_EQ(ev.metrics.size(), 2u);
    EXPECT_EQ(ev.metrics[0].scenario, "shifted");
    EXPECT_EQ(ev.metrics[1].n, 50);
    ASSERT_EQ(ev.summary.size(), 3u);
    EXPECT_EQ(ev.summary[0].set, kBenignLabel);
    EXPECT_EQ(ev.roc.size(), 2u);
    EXPECT_EQ(ev.hist_edges.edges.size(), 9u);
    ASSERT_EQ(ev.hist_counts.size(), 3u);
    for (const auto &[name, counts] : ev.hist_counts) {
        long total = 0;
        for (long c : counts)
            total += c;
        EXPECT_EQ(total, name == kBenignLabel ? 100 : name == "shifted" ? 60 : 50) << name;
    }
    EXPECT_EQ(ev.embedding.rows(), 60);
    EXPECT_EQ(ev.embedding.cols(), 2);
    EXPECT_EQ(ev.embed_set.size(), 60u);
    EXPECT_EQ(ev.top.size(), 3u * 3u); // benign included for reference
    EXPECT_EQ(ev.curves.size(), 2u);
    EXPECT_EQ(ev.confusion.size(), 2u * 2u);
    for (const auto &c : ev.confusion)
        EXPECT_EQ(c.m.tp + c.m.fn, c.scenario == "shifted" ? 60 : 50);
    EXPECT_EQ(ev.overlay.size(), 4u); // three set means and the most anomalous trace
}

TEST(Evaluate, ScoresMatchTheMetricsModule) {
    Fixture f;
    const Evaluation ev = evaluate(f.model, f.val, f.sets, small_options());
    const auto benign = anomaly_scores(f.model.critic, prepare(f.val, f.model));
    const auto shifted = anomaly_scores(f.model.critic, prepare(f.sets[0].second, f.model));
    EXPECT_EQ(ev.metrics[0].auc, roc_auc(benign, shifted).auc);
    EXPECT_EQ(ev.metrics[0].tpr_at_5, tpr_at_fpr(benign, shifted, 0.05).tpr);
}

TEST(Evaluate, Guards) {
    Fixture f;
    TraceSet tainted = f.val;
    tainted.labels[0] = "trojan";
    EXPECT_THROW(evaluate(f.model, tainted, f.sets), LeakageError);
    auto dup = f.sets;
    dup[1].first = "shifted";
    EXPECT_THROW(evaluate(f.model, f.val, dup), ConfigError);
    dup[1].first = kBenignLabel;
    EXPECT_THROW(evaluate(f.model, f.val, dup), ConfigError);
}

TEST(Report, WritesCsvsAndSvgs) {
    Fixture f;
    const auto dir = scratch_dir("report_eval");
    write_evaluation(evaluate(f.model, f.val, f.sets, small_options()), dir);
    for (const auto &name : evaluation_files())
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;

    const CsvTable metrics = read_csv(dir / "metrics.csv");
    ASSERT_EQ(metrics.rows.size(), 2u);
    EXPECT_EQ(metrics.rows[0][metrics.column("scenario")], "shifted");
    EXPECT_THROW(metrics.column("nonexistent"), DataError);

    const auto out = scratch_dir("report_out");
    render_report(dir, out);
    for (const auto &name : report_figures()) {
        const std::string svg = slurp(out / name);
        EXPECT_EQ(svg.rfind("<svg", 0), 0u) << name;
        EXPECT_NE(svg.find("</svg>"), std::string::npos) << name;
    }
    for (const auto &name : evaluation_files())
        EXPECT_EQ(slurp(out / name), slurp(dir / name)) << name;
}

TEST(Report, EmptyOrMissingDirectory) {
    const auto dir = scratch_dir("report_empty");
    EXPECT_THROW(render_report(dir, dir), EmptyInputError);
    EXPECT_THROW(render_report(dir / "absent", dir), EmptyInputError);
}

TEST(Csv, RoundTrip) {
    const auto path = scratch_dir("csv") / "t.csv";
    const CsvTable t{{"a", "b"}, {{"1", "x"}, {"2.5", "y"}}};
    write_csv(t, path);
    EXPECT_EQ(slurp(path), "a,b\n1,x\n2.5,y\n");
    const CsvTable back = read_csv(path);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
}
