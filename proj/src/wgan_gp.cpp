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

#include <pscreen/nn/wgan_gp.hpp>

#include <chrono>
#include <cmath>

namespace pscreen::nn {

namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kTrainStream = 1;

Mat<float> latent_batch(Index latent_dim, Index batch, Stream &stream) {
    Mat<float> z(latent_dim, batch);
    for (Index j = 0; j < batch; ++j)
        for (Index i = 0; i < latent_dim; ++i)
            z(i, j) = static_cast<float>(stream.normal());
    return z;
}

Signal<float> join(const Signal<float> &a, const Signal<float> &b) {
    Signal<float> s{Mat<float>(a.channels(), a.data.cols() + b.data.cols()), a.length};
    s.data << a.data, b.data;
    return s;
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

void TrainConfig::validate() const {
    if (!(lambda_gp >= 0.0) || !finite(lambda_gp))
        throw ConfigError("train.lambda_gp must be finite and non-negative");
    if (n_critic < 1)
        throw ConfigError("train.n_critic must be at least 1");
    if (!(lr > 0.0) || !finite(lr))
        throw ConfigError("train.lr must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
        throw ConfigError("train.beta1 and train.beta2 must lie in [0, 1)");
    if (epochs < 1)
        throw ConfigError("train.epochs must be at least 1");
    if (batch < 1)
        throw ConfigError("train.batch must be at least 1");
    if (latent_dim < 1)
        throw ConfigError("train.latent_dim must be at least 1");
    if (geom.kernel < 1 || geom.stride < 1 || geom.padding < 0)
        throw ConfigError("train convolution geometry is invalid");
    if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
        throw ConfigError("train.leaky_slope must lie in (0, 1)");
}

GeneratorArch generator_arch(const TrainConfig &cfg, Index length) {
    GeneratorArch a;
    a.latent_dim = cfg.latent_dim;
    a.length = length;
    return a;
}

CriticArch critic_arch(const TrainConfig &cfg, Index length) {
    CriticArch a;
    a.length = length;
    a.geom = cfg.geom;
    a.leaky_slope = cfg.leaky_slope;
    return a;
}

TrainResult train(const TraceSet &benign_train, const TrainConfig &cfg,
                  const EpochCallback &on_epoch) {
    cfg.validate();
    if (!benign_train.all_benign())
        throw LeakageError("training data contains non-benign traces");
    benign_train.validate();
    const Index n = benign_train.size();
    const Index length = benign_train.length();
    const Index batch = cfg.batch;
    const Index n_batches = n / batch;
    if (n_batches == 0)
        throw ConfigError("training set of " + std::to_string(n) +
                          " traces is smaller than one batch of " + std::to_string(batch));

    Stream init(cfg.seed, kInitStream);
    TrainResult result;
    result.generator = GeneratorParams<float>::init(generator_arch(cfg, length), init);
    result.critic = CriticParams<float>::init(critic_arch(cfg, length), init);
    auto &gen = result.generator;
    auto &critic = result.critic;

    const AdamConfig adam_cfg{cfg.lr, cfg.beta1, cfg.beta2, 1e-8};
    Adam<float> adam_g(adam_cfg);
    Adam<float> adam_d(adam_cfg);
    Stream stream(cfg.seed, kTrainStream);
    const auto lambda = static_cast<float>(cfg.lambda_gp);
    const float inv_batch = 1.0f / static_cast<float>(batch);

    // Real minibatches come from a cyclic pass over a fresh permutation; the
    // remainder that does not fill a batch is dropped at each reshuffle.
    std::vector<std::size_t> perm;
    Index next_batch = n_batches;
    TraceMatrix<float> real_rows(batch, length);
    const auto next_real = [&]() {
        if (next_batch == n_batches) {
            perm = stream.permutation(static_cast<std::size_t>(n));
            next_batch = 0;
        }
        for (Index r = 0; r < batch; ++r)
            real_rows.row(r) =
                benign_train.samples.row(static_cast<Index>(perm[next_batch * batch + r]));
        ++next_batch;
        return signal_from_rows(real_rows);
    };
    std::vector<float> eps(static_cast<std::size_t>(batch));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        double sum_critic = 0.0, sum_gp = 0.0, sum_gen = 0.0;

        for (Index it = 0; it < n_batches; ++it) {
            for (int k = 0; k < cfg.n_critic; ++k) {
                const Signal<float> real = next_real();
                const auto gtape =
                    generator_forward(gen, latent_batch(cfg.latent_dim, batch, stream));
                const Signal<float> fake = as_signal(gtape);
                for (auto &e : eps)
                    e = static_cast<float>(stream.uniform());

                // Critic: minimize mean D(fake) - mean D(real) + penalty.
                const auto tape = critic_forward(critic, join(real, fake));
                Vec<float> dscores(2 * batch);
                dscores.head(batch).setConstant(-inv_batch);
                dscores.tail(batch).setConstant(inv_batch);
                const double wdist = static_cast<double>(tape.scores.tail(batch).mean()) -
                                     static_cast<double>(tape.scores.head(batch).mean());
                auto back = critic_backward(critic, tape, dscores);
                auto gp = gradient_penalty<float>(critic, real, fake, eps, lambda);
                accumulate(back.grad, gp.grad);
                const double critic_loss = wdist + static_cast<double>(gp.value);
                if (!finite(critic_loss))
                    throw DivergedTrainingError("critic loss is not finite", epoch + 1);
                adam_d.step(critic.tensors(), back.grad.tensors());
                sum_critic += critic_loss;
                sum_gp += static_cast<double>(gp.value);
            }

            // Generator: minimize -mean D(G(z)).
            const auto gt = generator_forward(gen, latent_batch(cfg.latent_dim, batch, stream));
            const auto ct = critic_forward(critic, as_signal(gt));
            const double gen_loss = -static_cast<double>(ct.scores.mean());
            if (!finite(gen_loss))
                throw DivergedTrainingError("generator loss is not finite", epoch + 1);
            const auto dfake = critic_backward(
                critic, ct, Vec<float>(Vec<float>::Constant(batch, -inv_batch)), false, true);
            auto ggrad = generator_backward(gen, gt, dfake.input);
            adam_g.step(gen.tensors(), ggrad.tensors());
            sum_gen += gen_loss;
        }

        const double critic_steps = static_cast<double>(n_batches * cfg.n_critic);
        EpochLog log;
        log.critic_loss = sum_critic / critic_steps;
        log.gradient_penalty = sum_gp / critic_steps;
        log.generator_loss = sum_gen / static_cast<double>(n_batches);
        log.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!finite(log.critic_loss) || !finite(log.generator_loss) ||
            !finite(log.gradient_penalty))
            throw DivergedTrainingError("non-finite epoch loss", epoch + 1);
        result.log.epochs.push_back(log);
        if (on_epoch)
            on_epoch(epoch + 1, log);
    }
    return result;
}

Vec<float> critic_scores(const CriticParams<float> &d, const TraceMatrix<float> &rows,
                         Index chunk) {
    Vec<float> scores(rows.rows());
    for (Index begin = 0; begin < rows.rows(); begin += chunk) {
        const Index count = std::min(chunk, rows.rows() - begin);
        const auto tape = critic_forward(d, signal_from_rows(rows.middleRows(begin, count)));
        scores.segment(begin, count) = tape.scores;
    }
    return scores;
}

Mat<float> critic_features(const CriticParams<float> &d, const TraceMatrix<float> &rows,
                           Index chunk) {
    Mat<float> features(rows.rows(), d.head.in());
    for (Index begin = 0; begin < rows.rows(); begin += chunk) {
        const Index count = std::min(chunk, rows.rows() - begin);
        const auto tape = critic_forward(d, signal_from_rows(rows.middleRows(begin, count)));
        features.middleRows(begin, count) = tape.features().transpose();
    }
    return features;
}

} // namespace pscreen::nn
