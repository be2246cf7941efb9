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

#include <pscreen/nn/layers.hpp>
#include <pscreen/rng.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace pscreen::nn {

/// Named view of one parameter tensor, stored column-major as rows x cols.
template <class Scalar> struct TensorView {
    std::string name;
    Index rows;
    Index cols;
    Scalar *data;

    Index size() const { return rows * cols; }
    auto map() const { return Eigen::Map<Mat<Scalar>>(data, rows, cols); }
};

template <class Scalar>
void push_view(std::vector<TensorView<Scalar>> &out, std::string name, Mat<Scalar> &m) {
    out.push_back({std::move(name), m.rows(), m.cols(), m.data()});
}

template <class Scalar>
void push_view(std::vector<TensorView<Scalar>> &out, std::string name, Vec<Scalar> &v) {
    out.push_back({std::move(name), v.rows(), 1, v.data()});
}

/// Uniform(+-sqrt(6 / (fan_in + fan_out))) weights, zero biases.
template <class Scalar>
void init_uniform(Mat<Scalar> &w, Index fan_in, Index fan_out, Stream &stream) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (Index j = 0; j < w.cols(); ++j)
        for (Index i = 0; i < w.rows(); ++i)
            w(i, j) = static_cast<Scalar>((2.0 * stream.uniform() - 1.0) * limit);
}

// ---------------------------------------------------------------- generator

struct GeneratorArch {
    Index latent_dim = 100;
    Index hidden1 = 256;
    Index hidden2 = 512;
    Index length = 1500;
};

/// latent -> dense -> ReLU -> dense -> ReLU -> dense (linear) -> (1, length).
template <class Scalar> struct GeneratorParams {
    Dense<Scalar> dense1;
    Dense<Scalar> dense2;
    Dense<Scalar> dense_out;

    static GeneratorParams zeros(const GeneratorArch &a) {
        return {Dense<Scalar>::zeros(a.latent_dim, a.hidden1),
                Dense<Scalar>::zeros(a.hidden1, a.hidden2),
                Dense<Scalar>::zeros(a.hidden2, a.length)};
    }

    static GeneratorParams init(const GeneratorArch &a, Stream &stream) {
        auto g = zeros(a);
        for (Dense<Scalar> *d : {&g.dense1, &g.dense2, &g.dense_out})
            init_uniform(d->weight, d->in(), d->out(), stream);
        return g;
    }

    GeneratorArch arch() const {
        return {dense1.in(), dense1.out(), dense2.out(), dense_out.out()};
    }
    Index latent_dim() const { return dense1.in(); }
    Index length() const { return dense_out.out(); }

    std::vector<TensorView<Scalar>> tensors() {
        std::vector<TensorView<Scalar>> v;
        push_view(v, "generator.dense1.weight", dense1.weight);
        push_view(v, "generator.dense1.bias", dense1.bias);
        push_view(v, "generator.dense2.weight", dense2.weight);
        push_view(v, "generator.dense2.bias", dense2.bias);
        push_view(v, "generator.dense_out.weight", dense_out.weight);
        push_view(v, "generator.dense_out.bias", dense_out.bias);
        return v;
    }

    template <class Other> GeneratorParams<Other> cast() const {
        const auto c = [](const Dense<Scalar> &d) {
            return Dense<Other>{d.weight.template cast<Other>(), d.bias.template cast<Other>()};
        };
        return {c(dense1), c(dense2), c(dense_out)};
    }
};

template <class Scalar> struct GeneratorTape {
    Mat<Scalar> z;
    Mat<Scalar> pre1, h1, pre2, h2;
    Mat<Scalar> out; // length x batch
};

/// z is latent_dim x batch. Output is a single-channel signal.
template <class Scalar>
GeneratorTape<Scalar> generator_forward(const GeneratorParams<Scalar> &g, const Mat<Scalar> &z) {
    if (z.rows() != g.latent_dim())
        throw ShapeError("generator expects latent dimension " + std::to_string(g.latent_dim()) +
                         ", got " + std::to_string(z.rows()));
    GeneratorTape<Scalar> t;
    t.z = z;
    t.pre1 = forward(g.dense1, z);
    t.h1 = relu(t.pre1);
    t.pre2 = forward(g.dense2, t.h1);
    t.h2 = relu(t.pre2);
    t.out = forward(g.dense_out, t.h2);
    return t;
}

template <class Scalar> Signal<Scalar> as_signal(const GeneratorTape<Scalar> &t) {
    return {t.out.reshaped(1, t.out.size()), t.out.rows()};
}

/// Parameter gradients for a loss whose gradient with respect to the
/// generated signal is `dout`.
template <class Scalar>
GeneratorParams<Scalar> generator_backward(const GeneratorParams<Scalar> &g,
                                           const GeneratorTape<Scalar> &t,
                                           const Signal<Scalar> &dout) {
    const Mat<Scalar> dy = dout.data.reshaped(g.length(), t.out.cols());
    GeneratorParams<Scalar> grad;
    auto b3 = backward(g.dense_out, t.h2, dy);
    grad.dense_out = {std::move(b3.weight), std::move(b3.bias)};
    const Mat<Scalar> d2 = b3.input.cwiseProduct(leaky_relu_slope(t.pre2, Scalar(0)));
    auto b2 = backward(g.dense2, t.h1, d2);
    grad.dense2 = {std::move(b2.weight), std::move(b2.bias)};
    const Mat<Scalar> d1 = b2.input.cwiseProduct(leaky_relu_slope(t.pre1, Scalar(0)));
    auto b1 = backward(g.dense1, t.z, d1);
    grad.dense1 = {std::move(b1.weight), std::move(b1.bias)};
    return grad;
}

// ---------------------------------------------------------------- critic

struct CriticArch {
    Index length = 1500;
    std::array<Index, 3> channels = {32, 64, 128};
    ConvGeometry geom;
    double leaky_slope = 0.2;

    /// Temporal length after conv block i (0-based).
    Index conv_length(int i) const {
        Index len = length;
        for (int k = 0; k <= i; ++k)
            len = geom.out_length(len);
        return len;
    }
    Index feature_length() const { return channels[2] * conv_length(2); }
};

/// Three conv + LeakyReLU blocks, flatten, linear scalar head.
template <class Scalar> struct CriticParams {
    std::array<Conv1d<Scalar>, 3> conv;
    Dense<Scalar> head; // 1 x features
    Scalar slope = Scalar(0.2);
    Index length = 0;

    static CriticParams zeros(const CriticArch &a) {
        CriticParams d;
        Index in = 1;
        for (int i = 0; i < 3; ++i) {
            d.conv[i] = Conv1d<Scalar>::zeros(in, a.channels[i], a.geom);
            in = a.channels[i];
        }
        d.head = Dense<Scalar>::zeros(a.feature_length(), 1);
        d.slope = static_cast<Scalar>(a.leaky_slope);
        d.length = a.length;
        return d;
    }

    static CriticParams init(const CriticArch &a, Stream &stream) {
        auto d = zeros(a);
        for (auto &c : d.conv)
            init_uniform(c.weight, c.in_channels() * c.geom.kernel,
                         c.out_channels() * c.geom.kernel, stream);
        init_uniform(d.head.weight, d.head.in(), d.head.out(), stream);
        return d;
    }

    CriticArch arch() const {
        return {length,
                {conv[0].out_channels(), conv[1].out_channels(), conv[2].out_channels()},
                conv[0].geom,
                static_cast<double>(slope)};
    }

    std::vector<TensorView<Scalar>> tensors() {
        std::vector<TensorView<Scalar>> v;
        for (int i = 0; i < 3; ++i) {
            const std::string p = "critic.conv" + std::to_string(i + 1);
            push_view(v, p + ".weight", conv[i].weight);
            push_view(v, p + ".bias", conv[i].bias);
        }
        push_view(v, "critic.head.weight", head.weight);
        push_view(v, "critic.head.bias", head.bias);
        return v;
    }

    template <class Other> CriticParams<Other> cast() const {
        CriticParams<Other> d;
        for (int i = 0; i < 3; ++i)
            d.conv[i] = {conv[i].weight.template cast<Other>(), conv[i].bias.template cast<Other>(),
                         conv[i].geom};
        d.head = {head.weight.template cast<Other>(), head.bias.template cast<Other>()};
        d.slope = static_cast<Other>(slope);
        d.length = length;
        return d;
    }
};

template <class Scalar> struct CriticTape {
    Signal<Scalar> input;
    std::array<Mat<Scalar>, 3> cols;
    std::array<Signal<Scalar>, 3> pre;
    std::array<Signal<Scalar>, 3> act;
    Vec<Scalar> scores;

    /// Penultimate (flattened) features, features x batch.
    auto features() const { return act[2].flat(); }
};

template <class Scalar>
CriticTape<Scalar> critic_forward(const CriticParams<Scalar> &d, const Signal<Scalar> &x) {
    if (x.channels() != 1 || x.length != d.length)
        throw ShapeError("critic expects single-channel traces of length " +
                         std::to_string(d.length) + ", got " + std::to_string(x.channels()) +
                         " x " + std::to_string(x.length));
    CriticTape<Scalar> t;
    t.input = x;
    const Signal<Scalar> *h = &t.input;
    for (int i = 0; i < 3; ++i) {
        t.cols[i] = im2col(*h, d.conv[i].geom);
        t.pre[i] = forward_cols(d.conv[i], t.cols[i], d.conv[i].geom.out_length(h->length));
        t.act[i] = {leaky_relu(t.pre[i].data, d.slope), t.pre[i].length};
        h = &t.act[i];
    }
    t.scores = (d.head.weight * t.features()).transpose();
    t.scores.array() += d.head.bias(0);
    return t;
}

template <class Scalar> struct CriticBackward {
    CriticParams<Scalar> grad;
    Signal<Scalar> input; // empty unless requested
    /// Gradient with respect to each block's pre-activation.
    std::array<Signal<Scalar>, 3> dpre;
};

/// Backpropagates per-sample score gradients `dscores` (batch).
template <class Scalar>
CriticBackward<Scalar> critic_backward(const CriticParams<Scalar> &d, const CriticTape<Scalar> &t,
                                       const Vec<Scalar> &dscores, bool want_params = true,
                                       bool want_input = false) {
    const Index batch = t.input.batch();
    if (dscores.size() != batch)
        throw ShapeError("critic backward: expected " + std::to_string(batch) + " score gradients");
    CriticBackward<Scalar> out;
    if (want_params) {
        out.grad.head.weight = (t.features() * dscores).transpose();
        out.grad.head.bias = Vec<Scalar>::Constant(1, dscores.sum());
        out.grad.slope = d.slope;
        out.grad.length = d.length;
    }
    Signal<Scalar> dact{(d.head.weight.transpose() * dscores.transpose())
                            .reshaped(t.act[2].channels(), t.act[2].data.cols()),
                        t.act[2].length};
    for (int i = 2; i >= 0; --i) {
        out.dpre[i] = {dact.data.cwiseProduct(leaky_relu_slope(t.pre[i].data, d.slope)),
                       dact.length};
        if (want_params) {
            out.grad.conv[i] = {weight_grad(t.cols[i], out.dpre[i]),
                                out.dpre[i].data.rowwise().sum(), d.conv[i].geom};
        }
        const Index in_len = i == 0 ? t.input.length : t.act[i - 1].length;
        if (i > 0 || want_input)
            dact = input_grad(d.conv[i], out.dpre[i], in_len);
    }
    if (want_input)
        out.input = std::move(dact);
    return out;
}

/// For fixed activation masks the input gradient g = dD/dx is a linear
/// function of the weights. Given u = dP/dg per sample, returns dP/dtheta by
/// pushing u forward through the mask-frozen network (without biases) and
/// pairing each layer's forward signal with the backward signal `dpre`.
template <class Scalar>
CriticParams<Scalar> linearized_param_grad(const CriticParams<Scalar> &d,
                                           const CriticTape<Scalar> &t,
                                           const std::array<Signal<Scalar>, 3> &dpre,
                                           const Signal<Scalar> &u) {
    CriticParams<Scalar> grad;
    grad.slope = d.slope;
    grad.length = d.length;
    Signal<Scalar> r = u;
    for (int i = 0; i < 3; ++i) {
        const Mat<Scalar> cols = im2col(r, d.conv[i].geom);
        grad.conv[i] = {weight_grad(cols, dpre[i]), Vec<Scalar>::Zero(d.conv[i].out_channels()),
                        d.conv[i].geom};
        r = forward_cols(d.conv[i], cols, t.pre[i].length, false);
        r.data.array() *= leaky_relu_slope(t.pre[i].data, d.slope).array();
    }
    grad.head.weight = r.flat().rowwise().sum().transpose();
    grad.head.bias = Vec<Scalar>::Zero(1);
    return grad;
}

} // namespace pscreen::nn
