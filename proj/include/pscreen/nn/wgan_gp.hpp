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

#include <pscreen/nn/adam.hpp>
#include <pscreen/nn/networks.hpp>
#include <pscreen/trace.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pscreen::nn {

struct TrainConfig {
    double lambda_gp = 10.0;
    int n_critic = 5;
    double lr = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.9;
    int epochs = 400;
    Index batch = 128;
    Index latent_dim = 100;
    std::uint64_t seed = 7;
    ConvGeometry geom{5, 2, 2};
    double leaky_slope = 0.2;

    /// Throws ConfigError on non-positive sizes or rates.
    void validate() const;
};

struct EpochLog {
    double critic_loss = 0.0;      // mean D(fake) - mean D(real) + penalty
    double generator_loss = 0.0;   // -mean D(fake)
    double gradient_penalty = 0.0;
    double wall_seconds = 0.0;
};

struct TrainLog {
    std::vector<EpochLog> epochs;
};

template <class Scalar> struct PenaltyResult {
    Scalar value = 0;
    CriticParams<Scalar> grad;
    Vec<Scalar> grad_norms; // ||dD/dx|| at each interpolate
};

/// Norms below this are treated as flat: d||g||/dg is taken as 0.
inline constexpr double kGradNormFloor = 1e-12;

/// lambda * mean_b (||dD/dx(x_hat_b)|| - 1)^2 with
/// x_hat_b = eps_b * real_b + (1 - eps_b) * fake_b, and its parameter gradient.
template <class Scalar>
PenaltyResult<Scalar> gradient_penalty(const CriticParams<Scalar> &d, const Signal<Scalar> &real,
                                       const Signal<Scalar> &fake, std::span<const Scalar> eps,
                                       Scalar lambda) {
    const Index batch = real.batch();
    if (fake.batch() != batch || fake.length != real.length || fake.channels() != real.channels())
        throw ShapeError("gradient penalty: real and fake batches differ in shape");
    if (static_cast<Index>(eps.size()) != batch)
        throw ShapeError("gradient penalty: one interpolation weight per sample required");

    Signal<Scalar> mixed{Mat<Scalar>(real.channels(), real.data.cols()), real.length};
    for (Index b = 0; b < batch; ++b) {
        const Scalar e = eps[static_cast<std::size_t>(b)];
        mixed.sample(b) = e * real.sample(b) + (Scalar(1) - e) * fake.sample(b);
    }

    const CriticTape<Scalar> tape = critic_forward(d, mixed);
    const auto back = critic_backward(d, tape, Vec<Scalar>(Vec<Scalar>::Ones(batch)), false, true);
    const Signal<Scalar> &g = back.input;

    PenaltyResult<Scalar> out;
    out.grad_norms.resize(batch);
    Signal<Scalar> u{Mat<Scalar>::Zero(g.channels(), g.data.cols()), g.length};
    Scalar total = 0;
    for (Index b = 0; b < batch; ++b) {
        const Scalar norm = g.sample(b).norm();
        out.grad_norms(b) = norm;
        total += (norm - Scalar(1)) * (norm - Scalar(1));
        if (static_cast<double>(norm) >= kGradNormFloor)
            u.sample(b) = (Scalar(2) * lambda / static_cast<Scalar>(batch)) *
                          ((norm - Scalar(1)) / norm) * g.sample(b);
    }
    out.value = lambda * total / static_cast<Scalar>(batch);
    out.grad = linearized_param_grad(d, tape, back.dpre, u);
    return out;
}

/// Elementwise a += b over two parameter sets of identical shape.
template <class Params> void accumulate(Params &a, Params &b) {
    auto va = a.tensors();
    auto vb = b.tensors();
    for (std::size_t i = 0; i < va.size(); ++i)
        va[i].map() += vb[i].map();
}

struct TrainResult {
    GeneratorParams<float> generator;
    CriticParams<float> critic;
    TrainLog log;
};

using EpochCallback = std::function<void(int epoch, const EpochLog &)>;

/// One-class WGAN-GP on normalized benign traces. An epoch is floor(n / batch)
/// generator updates, each preceded by n_critic critic updates on successive
/// real minibatches (reshuffled after every full pass). Throws LeakageError on
/// non-benign labels and DivergedTrainingError on a non-finite loss.
TrainResult train(const TraceSet &benign_train, const TrainConfig &cfg,
                  const EpochCallback &on_epoch = {});

GeneratorArch generator_arch(const TrainConfig &cfg, Index length);
CriticArch critic_arch(const TrainConfig &cfg, Index length);

/// Critic scores of normalized traces (one per row), evaluated in chunks.
Vec<float> critic_scores(const CriticParams<float> &d, const TraceMatrix<float> &rows,
                         Index chunk = 256);

/// Penultimate critic features, one row per trace.
Mat<float> critic_features(const CriticParams<float> &d, const TraceMatrix<float> &rows,
                           Index chunk = 256);

} // namespace pscreen::nn
