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

#include <pscreen/errors.hpp>
#include <pscreen/rng.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pscreen {

using Index = Eigen::Index;

/// One sampled power waveform.
template <class Scalar> using Trace = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// n_traces x n_samples, one trace per row.
template <class Scalar>
using TraceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PowerTrace = Trace<float>;

inline const std::string kBenignLabel = "benign";

/// Equal-length traces with one class label each plus provenance metadata.
template <class Scalar> struct BasicTraceSet {
    TraceMatrix<Scalar> samples;
    std::vector<std::string> labels;
    std::map<std::string, std::string> meta;

    Index size() const { return samples.rows(); }
    Index length() const { return samples.cols(); }
    bool empty() const { return samples.rows() == 0; }

    auto trace(Index i) const { return samples.row(i); }

    bool all_benign() const {
        return std::all_of(labels.begin(), labels.end(),
                           [](const std::string &l) { return l == kBenignLabel; });
    }

    /// Throws if labels do not match the trace count or a sample is not finite.
    void validate() const {
        if (static_cast<Index>(labels.size()) != samples.rows())
            throw DataError("trace set has " + std::to_string(samples.rows()) + " traces but " +
                            std::to_string(labels.size()) + " labels");
        if (!samples.allFinite())
            throw DataError("trace set contains non-finite samples");
    }

    template <class Other> BasicTraceSet<Other> cast() const {
        return {samples.template cast<Other>(), labels, meta};
    }
};

using TraceSet = BasicTraceSet<float>;

/// Global normalization statistics (population convention).
struct NormStats {
    double mu = 0.0;
    double sigma = 1.0;
};

struct PreprocessConfig {
    Index crop_start = 500;
    Index crop_end = 2000;
    double val_fraction = 0.2;
};

struct Summary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

inline void check_crop(Index length, Index start, Index end) {
    if (start < 0 || start >= length)
        throw BoundsError("crop start outside [0, " + std::to_string(length) + ")", start);
    if (end <= start || end > length)
        throw BoundsError("crop end outside (" + std::to_string(start) + ", " +
                              std::to_string(length) + "]",
                          end);
}

template <class Scalar> Trace<Scalar> crop_trace(const Trace<Scalar> &trace, Index start, Index end) {
    check_crop(trace.size(), start, end);
    return trace.segment(start, end - start);
}

/// Crops every trace of a set to [start, end).
template <class Scalar>
BasicTraceSet<Scalar> crop(const BasicTraceSet<Scalar> &set, Index start, Index end) {
    check_crop(set.length(), start, end);
    return {set.samples.middleCols(start, end - start), set.labels, set.meta};
}

/// Pooled mean and population standard deviation over every sample. Sigma may
/// come back as zero; normalize() rejects that.
template <class Scalar> NormStats compute_norm_stats(const BasicTraceSet<Scalar> &set) {
    if (set.empty() || set.length() == 0)
        throw EmptyInputError("cannot compute normalization statistics of an empty set");
    if (!set.samples.allFinite())
        throw DataError("normalization statistics require finite samples");
    const auto pooled = set.samples.template cast<double>();
    const double n = static_cast<double>(pooled.size());
    const double mu = pooled.sum() / n;
    const double var = (pooled.array() - mu).square().sum() / n;
    return {mu, std::sqrt(var)};
}

template <class Scalar>
BasicTraceSet<Scalar> normalize(const BasicTraceSet<Scalar> &set, const NormStats &stats) {
    if (!(stats.sigma > 0.0))
        throw DegenerateDataError("cannot normalize with sigma = " + std::to_string(stats.sigma));
    BasicTraceSet<Scalar> out{{}, set.labels, set.meta};
    out.samples = ((set.samples.template cast<double>().array() - stats.mu) / stats.sigma)
                      .matrix()
                      .template cast<Scalar>();
    return out;
}

template <class Scalar>
BasicTraceSet<Scalar> denormalize(const BasicTraceSet<Scalar> &set, const NormStats &stats) {
    BasicTraceSet<Scalar> out{{}, set.labels, set.meta};
    out.samples = (set.samples.template cast<double>().array() * stats.sigma + stats.mu)
                      .matrix()
                      .template cast<Scalar>();
    return out;
}

/// Rows of `set` in the order given by `rows`.
template <class Scalar>
BasicTraceSet<Scalar> subset(const BasicTraceSet<Scalar> &set, std::span<const std::size_t> rows) {
    BasicTraceSet<Scalar> out;
    out.samples.resize(static_cast<Index>(rows.size()), set.length());
    out.labels.reserve(rows.size());
    out.meta = set.meta;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= static_cast<std::size_t>(set.size()))
            throw BoundsError("subset row outside trace set", static_cast<long long>(rows[i]));
        out.samples.row(static_cast<Index>(i)) = set.samples.row(static_cast<Index>(rows[i]));
        out.labels.push_back(set.labels[rows[i]]);
    }
    return out;
}

/// Stacks `b` below `a`; metadata of `a` wins.
template <class Scalar>
BasicTraceSet<Scalar> concat(const BasicTraceSet<Scalar> &a, const BasicTraceSet<Scalar> &b) {
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    if (a.length() != b.length())
        throw ShapeError("cannot concatenate traces of length " + std::to_string(a.length()) +
                         " and " + std::to_string(b.length()));
    BasicTraceSet<Scalar> out;
    out.samples.resize(a.size() + b.size(), a.length());
    out.samples << a.samples, b.samples;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    out.meta = b.meta;
    for (const auto &[k, v] : a.meta)
        out.meta[k] = v;
    return out;
}

template <class Scalar> struct Split {
    BasicTraceSet<Scalar> train;
    BasicTraceSet<Scalar> val;
};

/// Seeded Fisher-Yates shuffle, then the first round(n * (1 - f)) traces train
/// and the remainder validate.
template <class Scalar>
Split<Scalar> split_train_val(const BasicTraceSet<Scalar> &set, double val_fraction,
                              std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0))
        throw ConfigError("validation fraction must lie in (0, 1), got " +
                          std::to_string(val_fraction));
    const auto n = static_cast<std::size_t>(set.size());
    if (n < 2)
        throw ConfigError("need at least two traces to split, got " + std::to_string(n));
    const auto n_train =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - val_fraction)));
    if (n_train == 0 || n_train == n)
        throw ConfigError("validation fraction " + std::to_string(val_fraction) +
                          " leaves an empty partition for " + std::to_string(n) + " traces");
    Stream stream(seed, 0x5e11u);
    const auto perm = stream.permutation(n);
    const std::span<const std::size_t> all(perm);
    return {subset(set, all.first(n_train)), subset(set, all.subspan(n_train))};
}

template <class Scalar> Summary summarize(const BasicTraceSet<Scalar> &set) {
    if (set.empty() || set.length() == 0)
        throw EmptyInputError("cannot summarize an empty set");
    const auto pooled = set.samples.template cast<double>();
    const NormStats s = compute_norm_stats(set);
    return {pooled.minCoeff(), pooled.maxCoeff(), s.mu, s.sigma};
}

} // namespace pscreen
