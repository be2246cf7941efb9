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

#include <pscreen/detail/byteio.hpp>
#include <pscreen/scoring.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace pscreen {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double to_double(const std::string &s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw DataError("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw DataError("not a number: '" + s + "'");
    }
}

// ------------------------------------------------------------------ SVG

constexpr std::array<const char *, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;
    bool dashed = false;
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
};

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string render_svg(const Plot &plot) {
    constexpr double W = 720, H = 480, L = 70, R = 160, T = 40, B = 55;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    if (x1 - x0 <= 0.0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 <= 0.0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        o << "<text x=\"" << num(px(fx)) << "\" y=\"" << H - B + 16
          << "\" text-anchor=\"middle\">" << num(std::round(fx * 1e4) / 1e4) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << num(py(fy) + 4) << "\" text-anchor=\"end\">"
          << num(std::round(fy * 1e4) / 1e4) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
      << escape(plot.xlabel) << "</text>\n";
    o << "<text transform=\"translate(16," << (T + H - B) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const Series &s = plot.series[k];
        const char *color = kPalette[k % kPalette.size()];
        if (s.scatter) {
            o << "<g fill=\"" << color << "\" fill-opacity=\"0.6\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                  << "\" r=\"2\"/>\n";
            o << "</g>\n";
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
              << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << (i ? " " : "") << num(px(s.x[i])) << "," << num(py(s.y[i]));
            o << "\"/>\n";
        }
        const double ly = T + 14 + 18.0 * static_cast<double>(k);
        o << "<rect x=\"" << W - R + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"10\" fill=\""
          << color << "\"/>\n";
        o << "<text x=\"" << W - R + 30 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_text(const fs::path &path, const std::string &text) {
    detail::write_file(path.string(), std::vector<char>(text.begin(), text.end()));
}

/// Groups rows of a long-format table by the value of `key`, keeping first
/// appearance order.
std::vector<Series> group(const CsvTable &t, const std::string &key, const std::string &x,
                          const std::string &y) {
    const auto kc = t.column(key), xc = t.column(x), yc = t.column(y);
    std::vector<Series> out;
    for (const auto &row : t.rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Series &s) { return s.name == row[kc]; });
        if (it == out.end()) {
            out.push_back({row[kc], {}, {}});
            it = out.end() - 1;
        }
        it->x.push_back(to_double(row[xc]));
        it->y.push_back(to_double(row[yc]));
    }
    return out;
}

} // namespace

// ------------------------------------------------------------------ CSV

std::size_t CsvTable::column(const std::string &name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw DataError("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

void write_csv(const CsvTable &table, const fs::path &path) {
    std::string out;
    const auto line = [&out](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            out += (i ? "," : "") + fields[i];
        out += '\n';
    };
    line(table.header);
    for (const auto &r : table.rows)
        line(r);
    write_text(path, out);
}

CsvTable read_csv(const fs::path &path) {
    const auto bytes = detail::read_file(path.string());
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
            fields.push_back(f);
        if (line.back() == ',')
            fields.emplace_back();
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size())
                throw DataError(path.string() + ": row has " + std::to_string(fields.size()) +
                                " fields, header has " + std::to_string(t.header.size()));
            t.rows.push_back(std::move(fields));
        }
    }
    if (first)
        throw DataError(path.string() + " is empty");
    return t;
}

// ------------------------------------------------------------------ evaluate

Evaluation evaluate(const Model &model, const TraceSet &benign_val_raw,
                    const std::vector<std::pair<std::string, TraceSet>> &scenarios,
                    const EvalOptions &opt) {
    if (benign_val_raw.empty())
        throw EmptyInputError("evaluation needs benign validation traces");
    if (!benign_val_raw.all_benign())
        throw LeakageError("benign validation set contains non-benign traces");
    std::set<std::string> seen = {kBenignLabel};
    for (const auto &[name, set] : scenarios) {
        if (!seen.insert(name).second)
            throw ConfigError("duplicate or reserved scenario name '" + name + "'");
        if (set.empty())
            throw EmptyInputError("scenario '" + name + "' has no traces");
    }

    // Benign first, then scenarios in the given order.
    std::vector<std::pair<std::string, const TraceSet *>> sets = {{kBenignLabel, &benign_val_raw}};
    for (const auto &[name, set] : scenarios)
        sets.emplace_back(name, &set);

    Evaluation ev;
    std::vector<TraceSet> prepared;
    for (const auto &[name, set] : sets) {
        ev.summary.push_back({name, set->size(), set->length(), summarize(*set)});
        prepared.push_back(prepare(*set, model));
        ev.scores.push_back({name, anomaly_scores(model.critic, prepared.back())});
    }
    const std::vector<double> &benign = ev.scores.front().scores;

    std::vector<std::pair<std::string, std::vector<double>>> tampered;
    for (std::size_t i = 1; i < ev.scores.size(); ++i)
        tampered.emplace_back(ev.scores[i].set, ev.scores[i].scores);
    ev.metrics = scenario_report(benign, tampered);
    for (const auto &[name, s] : tampered)
        ev.roc.emplace_back(name, roc_auc(benign, s));

    // Shared histogram edges over the pooled scores.
    std::vector<double> pooled;
    for (const auto &s : ev.scores)
        pooled.insert(pooled.end(), s.scores.begin(), s.scores.end());
    ev.hist_edges = histogram(pooled, opt.hist_bins);
    const double lo = ev.hist_edges.edges.front(), hi = ev.hist_edges.edges.back();
    for (const auto &s : ev.scores)
        ev.hist_counts.emplace_back(s.set, histogram(s.scores, opt.hist_bins, lo, hi).counts);

    // Embedding of penultimate critic features.
    Index rows = 0;
    for (const auto &p : prepared)
        rows += std::min(p.size(), opt.embed_per_set);
    if (rows >= 2) {
        Eigen::MatrixXd features;
        Index at = 0;
        for (std::size_t i = 0; i < prepared.size(); ++i) {
            const Index take = std::min(prepared[i].size(), opt.embed_per_set);
            const TraceMatrix<float> head = prepared[i].samples.topRows(take);
            const Eigen::MatrixXd f = nn::critic_features(model.critic, head).cast<double>();
            if (features.size() == 0)
                features.resize(rows, f.cols());
            features.middleRows(at, take) = f;
            for (Index j = 0; j < take; ++j) {
                ev.embed_set.push_back(sets[i].first);
                ev.embed_id.push_back(j);
            }
            at += take;
        }
        ev.embedding = pca_embed(features, 2);
    }

    for (const auto &s : ev.scores)
        for (const auto &r : rank_top_anomalies(s.scores, std::min<Index>(opt.top_k, static_cast<Index>(s.scores.size()))))
            ev.top.emplace_back(s.set, r);

    ev.curves = model.history;

    // Mean normalized trace of each set, plus the single most anomalous trace.
    RankedTrace worst{0, -std::numeric_limits<double>::infinity()};
    std::size_t worst_set = 0;
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        ev.overlay.emplace_back(sets[i].first + " mean",
                                prepared[i].samples.cast<double>().colwise().mean());
        if (i == 0)
            continue;
        const auto top = rank_top_anomalies(ev.scores[i].scores, 1);
        if (!top.empty() && top.front().score > worst.score) {
            worst = top.front();
            worst_set = i;
        }
    }
    if (worst_set != 0)
        ev.overlay.emplace_back(sets[worst_set].first + " #" + std::to_string(worst.trace_id),
                                prepared[worst_set].samples.row(worst.trace_id).cast<double>());

    for (double f : opt.fprs) {
        const Threshold *t = model.threshold_for(f);
        if (t == nullptr)
            continue;
        for (const auto &[name, s] : tampered) {
            std::vector<ScreeningDecision> decisions;
            std::vector<std::string> labels;
            for (double b : benign) {
                decisions.push_back(decide(b, *t));
                labels.push_back(kBenignLabel);
            }
            for (double x : s) {
                decisions.push_back(decide(x, *t));
                labels.push_back(name);
            }
            ev.confusion.push_back({name, f, t->tau, confusion(decisions, labels)});
        }
    }

    ev.meta = {{"score", "-D(x)"},
               {"embedding", "pca"},
               {"embedding_features", "flattened final conv block activations"},
               {"embedding_per_set", std::to_string(opt.embed_per_set)},
               {"hist_bins", std::to_string(opt.hist_bins)},
               {"benign_validation_traces", std::to_string(benign_val_raw.size())},
               {"raw_length", std::to_string(model.raw_length)},
               {"crop_start", std::to_string(model.preprocess.crop_start)},
               {"crop_end", std::to_string(model.preprocess.crop_end)}};
    return ev;
}

const std::vector<std::string> &evaluation_files() {
    static const std::vector<std::string> files = {
        "summary.csv",  "metrics.csv", "roc.csv",     "hist.csv",      "embedding.csv",
        "top_anomalies.csv", "scores.csv", "curves.csv", "overlay.csv", "confusion.csv",
        "eval_meta.csv"};
    return files;
}

void write_evaluation(const Evaluation &ev, const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw FormatError(FormatErrc::Io, "cannot create " + dir.string() + ": " + ec.message());

    CsvTable t{{"set", "n", "samples", "min", "max", "mean", "std"}, {}};
    for (const auto &s : ev.summary)
        t.rows.push_back({s.set, std::to_string(s.n), std::to_string(s.samples), num(s.stats.min),
                          num(s.stats.max), num(s.stats.mean), num(s.stats.std)});
    write_csv(t, dir / "summary.csv");

    t = {{"scenario", "n", "auc", "tpr_at_1", "tpr_at_5", "tau_at_1", "tau_at_5"}, {}};
    for (const auto &r : ev.metrics)
        t.rows.push_back({r.scenario, std::to_string(r.n), num(r.auc), num(r.tpr_at_1),
                          num(r.tpr_at_5), num(r.tau_at_1), num(r.tau_at_5)});
    write_csv(t, dir / "metrics.csv");

    t = {{"scenario", "fpr", "tpr"}, {}};
    for (const auto &[name, roc] : ev.roc)
        for (const auto &p : roc.curve)
            t.rows.push_back({name, num(p.fpr), num(p.tpr)});
    write_csv(t, dir / "roc.csv");

    t = {{"set", "bin", "lo", "hi", "count"}, {}};
    for (const auto &[name, counts] : ev.hist_counts)
        for (std::size_t b = 0; b < counts.size(); ++b)
            t.rows.push_back({name, std::to_string(b), num(ev.hist_edges.edges[b]),
                              num(ev.hist_edges.edges[b + 1]), std::to_string(counts[b])});
    write_csv(t, dir / "hist.csv");

    t = {{"set", "trace_id", "pc1", "pc2"}, {}};
    for (std::size_t i = 0; i < ev.embed_set.size(); ++i) {
        const auto r = static_cast<Index>(i);
        t.rows.push_back({ev.embed_set[i], std::to_string(ev.embed_id[i]), num(ev.embedding(r, 0)),
                          num(ev.embedding.cols() > 1 ? ev.embedding(r, 1) : 0.0)});
    }
    write_csv(t, dir / "embedding.csv");

    t = {{"set", "rank", "trace_id", "score"}, {}};
    std::string prev;
    int rank = 0;
    for (const auto &[name, r] : ev.top) {
        rank = name == prev ? rank + 1 : 1;
        prev = name;
        t.rows.push_back({name, std::to_string(rank), std::to_string(r.trace_id), num(r.score)});
    }
    write_csv(t, dir / "top_anomalies.csv");

    t = {{"set", "trace_id", "score"}, {}};
    for (const auto &s : ev.scores)
        for (std::size_t i = 0; i < s.scores.size(); ++i)
            t.rows.push_back({s.set, std::to_string(i), num(s.scores[i])});
    write_csv(t, dir / "scores.csv");

    t = {{"epoch", "critic_loss", "generator_loss", "gradient_penalty"}, {}};
    for (std::size_t e = 0; e < ev.curves.size(); ++e)
        t.rows.push_back({std::to_string(e + 1), num(ev.curves[e].critic_loss),
                          num(ev.curves[e].generator_loss), num(ev.curves[e].gradient_penalty)});
    write_csv(t, dir / "curves.csv");

    t = {{"series", "t", "value"}, {}};
    for (const auto &[name, trace] : ev.overlay)
        for (Index i = 0; i < trace.size(); ++i)
            t.rows.push_back({name, std::to_string(i), num(trace[i])});
    write_csv(t, dir / "overlay.csv");

    t = {{"scenario", "target_fpr", "tau", "tp", "fp", "tn", "fn"}, {}};
    for (const auto &c : ev.confusion)
        t.rows.push_back({c.scenario, num(c.target_fpr), num(c.tau), std::to_string(c.m.tp),
                          std::to_string(c.m.fp), std::to_string(c.m.tn), std::to_string(c.m.fn)});
    write_csv(t, dir / "confusion.csv");

    t = {{"key", "value"}, {}};
    for (const auto &[k, v] : ev.meta)
        t.rows.push_back({k, v});
    write_csv(t, dir / "eval_meta.csv");
}

// ------------------------------------------------------------------ report

const std::vector<std::string> &report_figures() {
    static const std::vector<std::string> figures = {"roc.svg", "hist.svg", "overlay.svg",
                                                     "embedding.svg", "curves.svg"};
    return figures;
}

void render_report(const fs::path &eval_dir, const fs::path &out_dir) {
    if (!fs::is_directory(eval_dir))
        throw EmptyInputError("evaluation directory " + eval_dir.string() + " does not exist");
    std::vector<std::string> missing;
    for (const auto &f : evaluation_files())
        if (!fs::exists(eval_dir / f))
            missing.push_back(f);
    if (missing.size() == evaluation_files().size())
        throw EmptyInputError("evaluation directory " + eval_dir.string() +
                              " holds no evaluation output");
    if (!missing.empty())
        throw EmptyInputError("evaluation directory " + eval_dir.string() + " lacks " +
                              missing.front());

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw FormatError(FormatErrc::Io, "cannot create " + out_dir.string() + ": " + ec.message());

    Plot roc{"ROC per scenario", "false positive rate", "true positive rate",
             group(read_csv(eval_dir / "roc.csv"), "scenario", "fpr", "tpr")};
    roc.series.push_back({"chance", {0.0, 1.0}, {0.0, 1.0}, false, true});
    write_text(out_dir / "roc.svg", render_svg(roc));

    // Histogram as step outlines over the shared bin edges.
    const CsvTable hist = read_csv(eval_dir / "hist.csv");
    Plot hp{"Anomaly score distributions", "score -D(x)", "traces per bin", {}};
    {
        const auto sc = hist.column("set"), lc = hist.column("lo"), hc = hist.column("hi"),
                   cc = hist.column("count");
        for (const auto &row : hist.rows) {
            auto it = std::find_if(hp.series.begin(), hp.series.end(),
                                   [&](const Series &s) { return s.name == row[sc]; });
            if (it == hp.series.end()) {
                hp.series.push_back({row[sc], {}, {}});
                it = hp.series.end() - 1;
            }
            const double c = to_double(row[cc]);
            it->x.insert(it->x.end(), {to_double(row[lc]), to_double(row[hc])});
            it->y.insert(it->y.end(), {c, c});
        }
    }
    write_text(out_dir / "hist.svg", render_svg(hp));

    write_text(out_dir / "overlay.svg",
               render_svg({"Normalized trace overlay", "sample in analysis window", "normalized power",
                           group(read_csv(eval_dir / "overlay.csv"), "series", "t", "value")}));

    Plot emb{"Critic feature embedding (PCA)", "component 1", "component 2",
             group(read_csv(eval_dir / "embedding.csv"), "set", "pc1", "pc2")};
    for (auto &s : emb.series)
        s.scatter = true;
    write_text(out_dir / "embedding.svg", render_svg(emb));

    const CsvTable curves = read_csv(eval_dir / "curves.csv");
    Plot cp{"Training losses", "epoch", "loss", {}};
    for (const char *col : {"critic_loss", "generator_loss", "gradient_penalty"}) {
        Series s{col, {}, {}};
        const auto ec2 = curves.column("epoch"), vc = curves.column(col);
        for (const auto &row : curves.rows) {
            s.x.push_back(to_double(row[ec2]));
            s.y.push_back(to_double(row[vc]));
        }
        cp.series.push_back(std::move(s));
    }
    write_text(out_dir / "curves.svg", render_svg(cp));

    for (const auto &f : evaluation_files())
        if (!fs::equivalent(eval_dir, out_dir))
            fs::copy_file(eval_dir / f, out_dir / f, fs::copy_options::overwrite_existing);
}

} // namespace pscreen
