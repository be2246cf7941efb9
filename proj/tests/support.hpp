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

// Independent oracles and helpers shared by the unit tests and the
// acceptance runner.

#include <pscreen/aes.hpp>
#include <pscreen/nn/networks.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pscreen::testing {

/// AES-128 through OpenSSL's EVP interface (ECB, one block, no padding).
Block openssl_aes128(const AesKey &key, const Block &plaintext);

/// P(t > b) + 0.5 P(t == b) by enumerating every pair.
double brute_force_auc(std::span<const double> benign, std::span<const double> tampered);

/// Projection onto the two leading eigenvectors of the dense covariance,
/// signs fixed so each component's largest-magnitude loading is positive.
Eigen::MatrixXd dense_pca(const Eigen::MatrixXd &features, int dims);

/// ||a - b|| / max(||a||, ||b||, floor).
double relative_error(const Eigen::VectorXd &a, const Eigen::VectorXd &b, double floor = 1e-12);

/// Central differences of f with respect to every entry of `x`, in place.
Eigen::VectorXd numeric_gradient(const std::function<double()> &f, std::span<double *const> x,
                                 double h = 1e-4);

/// Pointers to every scalar of every tensor view.
std::vector<double *> flatten(const std::vector<nn::TensorView<double>> &views);
Eigen::VectorXd gather(const std::vector<nn::TensorView<double>> &views);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string &name);

/// Runs the command-line tool with `args` (shell-quoted by the caller);
/// returns its exit status. stdout/stderr go to `log` when given.
int run_cli(const std::string &args, const std::filesystem::path &log = {});

std::string slurp(const std::filesystem::path &path);

} // namespace pscreen::testing
