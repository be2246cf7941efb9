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

#include <pscreen/model.hpp>
#include <pscreen/scoring.hpp>

#include "support.hpp"

#include "gtest/gtest.h"

#include <nlohmann/json.hpp>

#include <cstring>

using namespace pscreen;
using pscreen::testing::scratch_dir;

namespace {

Model small_model(std::uint64_t seed = 1) {
    Model m;
    m.train.latent_dim = 4;
    m.train.geom = {5, 2, 2};
    m.train.seed = seed;
    Stream st(seed);
    m.generator = nn::GeneratorParams<float>::init({4, 8, 8, 32}, st);
    m.critic = nn::CriticParams<float>::init({32, {4, 4, 4}, {5, 2, 2}, 0.2}, st);
    for (auto &v : m.critic.tensors())
        for (Index i = 0; i < v.size(); ++i)
            v.data[i] += 0.01f * static_cast<float>(st.normal()); // non-zero biases too
    m.norm = {-0.0132, 0.0669};
    m.preprocess = {4, 36, 0.2};
    m.raw_length = 40;
    m.thresholds = {{1.25, 0.01, 200}, {-0.5, 0.05, 200}};
    m.history = {{0.5, -0.25, 0.125, 0.0}, {0.25, -0.125, 0.0625, 0.0}};
    return m;
}

struct Parts {
    std::uint16_t version;
    std::string manifest;
    std::vector<char> blobs;
};

Parts split(const std::vector<char> &bytes) {
    Parts p;
    std::memcpy(&p.version, bytes.data() + 4, 2);
    std::uint32_t len = 0;
    std::memcpy(&len, bytes.data() + 6, 4);
    p.manifest.assign(bytes.data() + 10, len);
    p.blobs.assign(bytes.begin() + 10 + len, bytes.end());
    return p;
}

std::vector<char> join(const Parts &p) {
    std::vector<char> out{'P', 'S', 'C', 'M'};
    out.resize(10);
    std::memcpy(out.data() + 4, &p.version, 2);
    const auto len = static_cast<std::uint32_t>(p.manifest.size());
    std::memcpy(out.data() + 6, &len, 4);
    out.insert(out.end(), p.manifest.begin(), p.manifest.end());
    out.insert(out.end(), p.blobs.begin(), p.blobs.end());
    return out;
}

FormatErrc decode_error(const std::vector<char> &bytes) {
    try {
        decode_model(bytes);
    } catch (const FormatError &e) {
        return e.code();
    }
    ADD_FAILURE() << "decode succeeded";
    return FormatErrc::Io;
}

std::size_t parameter_count(Model &m) {
    std::size_t n = 0;
    for (const auto &v : m.generator.tensors())
        n += static_cast<std::size_t>(v.size());
    for (const auto &v : m.critic.tensors())
        n += static_cast<std::size_t>(v.size());
    return n;
}

} // namespace

TEST(ModelFormat, EncodeDecodeEncodeIsBitExact) {
    Model m = small_model();
    const auto bytes = encode_model(m);
    EXPECT_EQ(encode_model(decode_model(bytes)), bytes);
}

TEST(ModelFormat, RoundTripPreservesFields) {
    Model m = small_model();
    const Model back = decode_model(encode_model(m));
    EXPECT_EQ(back.norm.mu, m.norm.mu);
    EXPECT_EQ(back.norm.sigma, m.norm.sigma);
    EXPECT_EQ(back.raw_length, 40);
    EXPECT_EQ(back.preprocess.crop_start, 4);
    EXPECT_EQ(back.preprocess.crop_end, 36);
    ASSERT_EQ(back.thresholds.size(), 2u);
    EXPECT_EQ(back.thresholds[0].tau, 1.25);
    EXPECT_EQ(back.thresholds[1].target_fpr, 0.05);
    EXPECT_EQ(back.thresholds[1].calibration_size, 200);
    ASSERT_EQ(back.history.size(), 2u);
    EXPECT_EQ(back.history[1].gradient_penalty, 0.0625);
    EXPECT_EQ(back.train.seed, 1u);
    EXPECT_EQ(back.critic.arch().channels, m.critic.arch().channels);
    ASSERT_NE(back.threshold_for(0.05), nullptr);
    EXPECT_EQ(back.threshold_for(0.05)->tau, -0.5);
    EXPECT_EQ(back.threshold_for(0.02), nullptr);
}

TEST(ModelFormat, ScoresIdenticalAfterSaveAndLoad) {
    Model m = small_model();
    const auto dir = scratch_dir("model_roundtrip");
    save_model((dir / "m.pscm").string(), m);
    const Model back = load_model((dir / "m.pscm").string());
    Stream st(9);
    for (int i = 0; i < 100; ++i) {
        PowerTrace x(32);
        for (Index t = 0; t < 32; ++t)
            x(t) = static_cast<float>(st.normal());
        ASSERT_EQ(anomaly_score(back.critic, x), anomaly_score(m.critic, x));
    }
}

TEST(ModelFormat, BlobSizeIsFourBytesPerParameter) {
    Model m = small_model();
    const auto p = split(encode_model(m));
    EXPECT_EQ(p.version, kModelFormatVersion);
    EXPECT_EQ(p.blobs.size(), 4 * parameter_count(m));
    const auto j = nlohmann::json::parse(p.manifest);
    EXPECT_EQ(j.at("storage_order"), "column-major");
    EXPECT_EQ(j.at("tensors").size(), 6u + 8u);
}

TEST(ModelFormat, BadMagic) {
    auto bytes = encode_model(small_model());
    bytes[0] = 'X';
    EXPECT_EQ(decode_error(bytes), FormatErrc::BadMagic);
    EXPECT_EQ(decode_error({'P', 'S'}), FormatErrc::BadMagic);
}

TEST(ModelFormat, VersionMismatch) {
    auto p = split(encode_model(small_model()));
    p.version = 2;
    EXPECT_EQ(decode_error(join(p)), FormatErrc::VersionMismatch);
}

TEST(ModelFormat, Truncated) {
    auto bytes = encode_model(small_model());
    EXPECT_EQ(decode_error({bytes.begin(), bytes.end() - 1}), FormatErrc::Truncated);
    EXPECT_EQ(decode_error({bytes.begin(), bytes.begin() + 8}), FormatErrc::Truncated);
    EXPECT_EQ(decode_error({bytes.begin(), bytes.begin() + 40}), FormatErrc::Truncated);
}

TEST(ModelFormat, TrailingBytesAreShapeMismatch) {
    auto bytes = encode_model(small_model());
    bytes.insert(bytes.end(), 4, '\0');
    EXPECT_EQ(decode_error(bytes), FormatErrc::ShapeMismatch);
}

TEST(ModelFormat, TensorListDisagreeingWithArchitecture) {
    auto p = split(encode_model(small_model()));
    auto j = nlohmann::json::parse(p.manifest);
    j["tensors"][0]["shape"][0] = 9;
    p.manifest = j.dump();
    EXPECT_EQ(decode_error(join(p)), FormatErrc::ShapeMismatch);
}

TEST(ModelFormat, MalformedManifest) {
    auto p = split(encode_model(small_model()));
    auto j = nlohmann::json::parse(p.manifest);
    j.erase("norm");
    p.manifest = j.dump();
    EXPECT_EQ(decode_error(join(p)), FormatErrc::BadManifest);
    p.manifest = "{not json";
    EXPECT_EQ(decode_error(join(p)), FormatErrc::BadManifest);
}

TEST(ModelFormat, MissingFileIsIoError) {
    try {
        load_model((scratch_dir("model_missing") / "absent.pscm").string());
        FAIL();
    } catch (const FormatError &e) {
        EXPECT_EQ(e.code(), FormatErrc::Io);
    }
}

TEST(ModelFormat, NonPositiveSigmaIsCorruptModel) {
    Model m = small_model();
    m.norm.sigma = 0.0;
    TraceSet raw{TraceMatrix<float>::Zero(1, 40), {kBenignLabel}, {}};
    EXPECT_THROW(prepare(raw, m), CorruptModelError);
}
