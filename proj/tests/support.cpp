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

#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace pscreen::testing {

Block openssl_aes128(const AesKey &key, const Block &plaintext) {
    EVP_CIPHER_CTX *ctx = EVP_CIPHER_CTX_new();
    if (ctx == nullptr)
        throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    Block out{};
    int len = 0;
    const bool ok = EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr) == 1 &&
                    EVP_CIPHER_CTX_set_padding(ctx, 0) == 1 &&
                    EVP_EncryptUpdate(ctx, out.data(), &len, plaintext.data(), 16) == 1 && len == 16;
    EVP_CIPHER_CTX_free(ctx);
    if (!ok)
        throw std::runtime_error("OpenSSL AES-128 encryption failed");
    return out;
}

double brute_force_auc(std::span<const double> benign, std::span<const double> tampered) {
    double wins = 0.0;
    for (double t : tampered)
        for (double b : benign)
            wins += t > b ? 1.0 : (t == b ? 0.5 : 0.0);
    return wins / (static_cast<double>(benign.size()) * static_cast<double>(tampered.size()));
}

Eigen::MatrixXd dense_pca(const Eigen::MatrixXd &features, int dims) {
    const Eigen::MatrixXd centred = features.rowwise() - features.colwise().mean();
    const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(features.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::Index f = cov.cols();
    Eigen::MatrixXd basis(f, dims);
    for (int k = 0; k < dims; ++k) {
        Eigen::VectorXd v = solver.eigenvectors().col(f - 1 - k);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0)
            v = -v;
        basis.col(k) = v;
    }
    return centred * basis;
}

double relative_error(const Eigen::VectorXd &a, const Eigen::VectorXd &b, double floor) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

Eigen::VectorXd numeric_gradient(const std::function<double()> &f, std::span<double *const> x,
                                 double h) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = *x[i];
        *x[i] = saved + h;
        const double up = f();
        *x[i] = saved - h;
        const double down = f();
        *x[i] = saved;
        g(static_cast<Eigen::Index>(i)) = (up - down) / (2.0 * h);
    }
    return g;
}

std::vector<double *> flatten(const std::vector<nn::TensorView<double>> &views) {
    std::vector<double *> out;
    for (const auto &v : views)
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out.push_back(v.data + i);
    return out;
}

Eigen::VectorXd gather(const std::vector<nn::TensorView<double>> &views) {
    Eigen::Index n = 0;
    for (const auto &v : views)
        n += v.size();
    Eigen::VectorXd out(n);
    Eigen::Index at = 0;
    for (const auto &v : views) {
        out.segment(at, v.size()) = v.map().reshaped();
        at += v.size();
    }
    return out;
}

std::filesystem::path scratch_dir(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("pscreen-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int run_cli(const std::string &args, const std::filesystem::path &log) {
    std::string cmd = std::string(PSCREEN_CLI) + " " + args;
    cmd += log.empty() ? " >/dev/null 2>&1" : " >'" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status))
        return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace pscreen::testing
