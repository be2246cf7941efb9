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

#include <pscreen/nn/networks.hpp>

#include <cmath>
#include <vector>

namespace pscreen::nn {

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.9;
    double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers mirror the parameter list given
/// on the first step.
template <class Scalar> class Adam {
  public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    void step(const std::vector<TensorView<Scalar>> &params,
              const std::vector<TensorView<Scalar>> &grads) {
        if (params.size() != grads.size())
            throw ShapeError("adam: parameter and gradient lists differ in length");
        if (m_.empty()) {
            for (const auto &p : params) {
                m_.push_back(Mat<Scalar>::Zero(p.rows, p.cols));
                v_.push_back(Mat<Scalar>::Zero(p.rows, p.cols));
            }
        }
        if (m_.size() != params.size())
            throw ShapeError("adam: parameter list changed between steps");
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        const auto b1 = static_cast<Scalar>(cfg_.beta1);
        const auto b2 = static_cast<Scalar>(cfg_.beta2);
        const auto step_size = static_cast<Scalar>(cfg_.lr / c1);
        const auto inv_c2 = static_cast<Scalar>(1.0 / c2);
        const auto eps = static_cast<Scalar>(cfg_.eps);
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].rows != grads[i].rows || params[i].cols != grads[i].cols ||
                m_[i].rows() != params[i].rows || m_[i].cols() != params[i].cols)
                throw ShapeError("adam: shape mismatch for " + params[i].name);
            auto p = params[i].map();
            const auto g = grads[i].map();
            m_[i] = b1 * m_[i] + (Scalar(1) - b1) * g;
            v_[i] = b2 * v_[i] + (Scalar(1) - b2) * g.cwiseProduct(g);
            p.array() -= step_size * m_[i].array() / ((v_[i].array() * inv_c2).sqrt() + eps);
        }
    }

    long steps() const { return t_; }

  private:
    AdamConfig cfg_;
    std::vector<Mat<Scalar>> m_;
    std::vector<Mat<Scalar>> v_;
    long t_ = 0;
};

} // namespace pscreen::nn
