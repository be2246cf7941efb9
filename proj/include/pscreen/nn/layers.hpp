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

#include <Eigen/Core>

#include <string>

namespace pscreen::nn {

using Index = Eigen::Index;

template <class Scalar> using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar> using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Batch of multichannel 1-D signals. Column `b * length + t` holds the
/// channel vector of sample b at time t, so each sample is a contiguous
/// channels x length block.
template <class Scalar> struct Signal {
    Mat<Scalar> data;
    Index length = 0;

    Index channels() const { return data.rows(); }
    Index batch() const { return length == 0 ? 0 : data.cols() / length; }

    auto sample(Index b) const { return data.middleCols(b * length, length); }
    auto sample(Index b) { return data.middleCols(b * length, length); }

    /// Each sample flattened to one column: (channels * length) x batch.
    auto flat() const { return data.reshaped(channels() * length, batch()); }
};

/// Single-channel batch from row-per-trace storage (batch x length).
template <class Derived> Signal<typename Derived::Scalar> signal_from_rows(const Eigen::MatrixBase<Derived> &rows) {
    Signal<typename Derived::Scalar> s;
    s.length = rows.cols();
    s.data = rows.transpose().reshaped(1, rows.size());
    return s;
}

// ---------------------------------------------------------------- dense

template <class Scalar> struct Dense {
    Mat<Scalar> weight; // out x in
    Vec<Scalar> bias;   // out

    Index in() const { return weight.cols(); }
    Index out() const { return weight.rows(); }

    static Dense zeros(Index in, Index out) {
        return {Mat<Scalar>::Zero(out, in), Vec<Scalar>::Zero(out)};
    }
};

template <class Scalar> struct DenseBackward {
    Mat<Scalar> input;
    Mat<Scalar> weight;
    Vec<Scalar> bias;
};

/// y = W x + b for a batch of column vectors x (in x batch).
template <class Scalar> Mat<Scalar> forward(const Dense<Scalar> &layer, const Mat<Scalar> &x) {
    if (x.rows() != layer.in())
        throw ShapeError("dense layer expects " + std::to_string(layer.in()) + " inputs, got " +
                         std::to_string(x.rows()));
    Mat<Scalar> y = layer.weight * x;
    y.colwise() += layer.bias;
    return y;
}

template <class Scalar>
DenseBackward<Scalar> backward(const Dense<Scalar> &layer, const Mat<Scalar> &x,
                               const Mat<Scalar> &dy) {
    if (dy.rows() != layer.out() || dy.cols() != x.cols())
        throw ShapeError("dense backward: gradient shape disagrees with the forward pass");
    return {layer.weight.transpose() * dy, dy * x.transpose(), dy.rowwise().sum()};
}

// ---------------------------------------------------------------- conv1d

struct ConvGeometry {
    Index kernel = 5;
    Index stride = 2;
    Index padding = 2;

    /// floor((in + 2 * padding - kernel) / stride) + 1; throws if no output fits.
    Index out_length(Index in) const {
        if (kernel <= 0 || stride <= 0 || padding < 0)
            throw ShapeError("invalid convolution geometry");
        const Index padded = in + 2 * padding;
        if (kernel > padded)
            throw ShapeError("kernel of " + std::to_string(kernel) +
                             " is longer than the padded input of " + std::to_string(padded));
        return (padded - kernel) / stride + 1;
    }
};

/// Cross-correlation with zero padding. Weight column k * in_channels + c
/// multiplies input channel c at kernel tap k.
template <class Scalar> struct Conv1d {
    Mat<Scalar> weight; // out_channels x (kernel * in_channels)
    Vec<Scalar> bias;   // out_channels
    ConvGeometry geom;

    Index in_channels() const { return weight.cols() / geom.kernel; }
    Index out_channels() const { return weight.rows(); }

    static Conv1d zeros(Index in_channels, Index out_channels, ConvGeometry g) {
        return {Mat<Scalar>::Zero(out_channels, g.kernel * in_channels),
                Vec<Scalar>::Zero(out_channels), g};
    }
};

/// Unfolds every receptive field into a column: (kernel * channels) x (batch * out_len).
template <class Scalar> Mat<Scalar> im2col(const Signal<Scalar> &x, const ConvGeometry &g) {
    const Index c = x.channels();
    const Index out_len = g.out_length(x.length);
    const Index batch = x.batch();
    Mat<Scalar> cols = Mat<Scalar>::Zero(g.kernel * c, batch * out_len);
    for (Index b = 0; b < batch; ++b)
        for (Index t = 0; t < out_len; ++t) {
            const Index col = b * out_len + t;
            const Index origin = t * g.stride - g.padding;
            for (Index k = 0; k < g.kernel; ++k) {
                const Index src = origin + k;
                if (src >= 0 && src < x.length)
                    cols.block(k * c, col, c, 1) = x.data.col(b * x.length + src);
            }
        }
    return cols;
}

/// Adjoint of im2col: scatters columns back onto a signal of `length` samples.
template <class Scalar>
Signal<Scalar> col2im(const Mat<Scalar> &cols, Index channels, Index length, Index batch,
                      const ConvGeometry &g) {
    const Index out_len = g.out_length(length);
    Signal<Scalar> x{Mat<Scalar>::Zero(channels, batch * length), length};
    for (Index b = 0; b < batch; ++b)
        for (Index t = 0; t < out_len; ++t) {
            const Index col = b * out_len + t;
            const Index origin = t * g.stride - g.padding;
            for (Index k = 0; k < g.kernel; ++k) {
                const Index src = origin + k;
                if (src >= 0 && src < length)
                    x.data.col(b * length + src) += cols.block(k * channels, col, channels, 1);
            }
        }
    return x;
}

template <class Scalar> void check_input(const Conv1d<Scalar> &layer, const Signal<Scalar> &x) {
    if (x.channels() != layer.in_channels())
        throw ShapeError("conv1d expects " + std::to_string(layer.in_channels()) +
                         " input channels, got " + std::to_string(x.channels()));
}

/// Convolution of an already unfolded input.
template <class Scalar>
Signal<Scalar> forward_cols(const Conv1d<Scalar> &layer, const Mat<Scalar> &cols, Index out_len,
                            bool with_bias = true) {
    Signal<Scalar> y{layer.weight * cols, out_len};
    if (with_bias)
        y.data.colwise() += layer.bias;
    return y;
}

template <class Scalar>
Signal<Scalar> forward(const Conv1d<Scalar> &layer, const Signal<Scalar> &x) {
    check_input(layer, x);
    return forward_cols(layer, im2col(x, layer.geom), layer.geom.out_length(x.length));
}

template <class Scalar> struct ConvBackward {
    Signal<Scalar> input;
    Mat<Scalar> weight;
    Vec<Scalar> bias;
};

/// Weight gradient dy * cols^T of an unfolded input.
template <class Scalar> Mat<Scalar> weight_grad(const Mat<Scalar> &cols, const Signal<Scalar> &dy) {
    return dy.data * cols.transpose();
}

/// Gradient with respect to the input only.
template <class Scalar>
Signal<Scalar> input_grad(const Conv1d<Scalar> &layer, const Signal<Scalar> &dy, Index in_length) {
    const Mat<Scalar> dcols = layer.weight.transpose() * dy.data;
    return col2im(dcols, layer.in_channels(), in_length, dy.batch(), layer.geom);
}

template <class Scalar>
ConvBackward<Scalar> backward(const Conv1d<Scalar> &layer, const Signal<Scalar> &x,
                              const Signal<Scalar> &dy) {
    check_input(layer, x);
    if (dy.channels() != layer.out_channels() || dy.length != layer.geom.out_length(x.length) ||
        dy.batch() != x.batch())
        throw ShapeError("conv1d backward: gradient shape disagrees with the forward pass");
    const Mat<Scalar> cols = im2col(x, layer.geom);
    return {input_grad(layer, dy, x.length), weight_grad(cols, dy), dy.data.rowwise().sum()};
}

// ---------------------------------------------------------------- activations

/// Elementwise derivative of LeakyReLU; slope 0 gives ReLU. The subgradient
/// at 0 is 1.
template <class Scalar> Mat<Scalar> leaky_relu_slope(const Mat<Scalar> &pre, Scalar slope) {
    return (pre.array() >= Scalar(0)).select(Mat<Scalar>::Ones(pre.rows(), pre.cols()), slope);
}

template <class Scalar> Mat<Scalar> leaky_relu(const Mat<Scalar> &x, Scalar slope) {
    return (x.array() >= Scalar(0)).select(x, slope * x);
}

template <class Scalar> Mat<Scalar> relu(const Mat<Scalar> &x) { return leaky_relu(x, Scalar(0)); }

} // namespace pscreen::nn
