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

#include <pscreen/metrics.hpp>
#include <pscreen/model.hpp>
#include <pscreen/trace.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pscreen {

/// Plain comma-separated table; fields never contain commas or quotes.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws DataError if absent.
    std::size_t column(const std::string &name) const;
};

void write_csv(const CsvTable &table, const std::filesystem::path &path);
/// Throws FormatError(Io) if unreadable, DataError on ragged rows.
CsvTable read_csv(const std::filesystem::path &path);

struct EvalOptions {
    int hist_bins = 50;
    Index top_k = 10;
    /// Traces per set fed to the feature embedding (first ones in file order).
    Index embed_per_set = 500;
    std::vector<double> fprs = {0.01, 0.05};
};

struct SetSummary {
    std::string set;
    Index n = 0;
    Index samples = 0;
    Summary stats;
};

struct ScoredSet {
    std::string set;
    std::vector<double> scores;
};

/// Everything `evaluate` writes; each member maps to one CSV file.
struct Evaluation {
    std::vector<SetSummary> summary;                        // summary.csv
    std::vector<ScenarioRow> metrics;                       // metrics.csv
    std::vector<std::pair<std::string, RocResult>> roc;     // roc.csv
    Histogram hist_edges;                                   // hist.csv (shared edges)
    std::vector<std::pair<std::string, std::vector<long>>> hist_counts;
    std::vector<std::string> embed_set;                     // embedding.csv
    std::vector<Index> embed_id;
    Eigen::MatrixXd embedding;
    std::vector<std::pair<std::string, RankedTrace>> top;   // top_anomalies.csv
    std::vector<ScoredSet> scores;                          // scores.csv
    std::vector<nn::EpochLog> curves;                       // curves.csv
    std::vector<std::pair<std::string, Trace<double>>> overlay; // overlay.csv
    struct Confusion {
        std::string scenario;
        double target_fpr;
        double tau;
        ConfusionMatrix m;
    };
    std::vector<Confusion> confusion;                       // confusion.csv
    std::vector<std::pair<std::string, std::string>> meta;  // eval_meta.csv
};

/// Scores the benign validation set and every scenario set with the model,
/// then builds all figure data. Scenario names must be unique and not
/// "benign".
Evaluation evaluate(const Model &model, const TraceSet &benign_val_raw,
                    const std::vector<std::pair<std::string, TraceSet>> &scenarios,
                    const EvalOptions &opt = {});

/// Names of the CSV files written by write_evaluation.
const std::vector<std::string> &evaluation_files();

void write_evaluation(const Evaluation &eval, const std::filesystem::path &dir);

/// Names of the SVG files written by render_report.
const std::vector<std::string> &report_figures();

/// Reads an evaluation directory and writes one SVG per figure plus a copy
/// of each CSV. Throws EmptyInputError if the directory holds no evaluation.
void render_report(const std::filesystem::path &eval_dir, const std::filesystem::path &out_dir);

} // namespace pscreen
