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

#include <pscreen/detail/byteio.hpp>

#include <nlohmann/json.hpp>

#include <cmath>

namespace pscreen {

using nlohmann::json;

namespace {

constexpr char kMagic[] = "PSCM";

// The views only read through the pointers here.
template <class P> auto views(const P &p) { return const_cast<P &>(p).tensors(); }

json tensor_list(const Model &m) {
    json list = json::array();
    for (const auto &v : views(m.generator))
        list.push_back({{"name", v.name}, {"shape", {v.rows, v.cols}}});
    for (const auto &v : views(m.critic))
        list.push_back({{"name", v.name}, {"shape", {v.rows, v.cols}}});
    return list;
}

json manifest(const Model &m) {
    const auto ga = m.generator.arch();
    const auto &cfg = m.train;
    json thresholds = json::array();
    for (const auto &t : m.thresholds)
        thresholds.push_back({{"target_fpr", t.target_fpr},
                              {"tau", t.tau},
                              {"calibration_size", t.calibration_size}});
    json history = {{"critic_loss", json::array()},
                    {"generator_loss", json::array()},
                    {"gradient_penalty", json::array()}};
    for (const auto &e : m.history) {
        history["critic_loss"].push_back(e.critic_loss);
        history["generator_loss"].push_back(e.generator_loss);
        history["gradient_penalty"].push_back(e.gradient_penalty);
    }
    return {
        {"architecture",
         {{"generator",
           {{"latent_dim", ga.latent_dim},
            {"hidden", {ga.hidden1, ga.hidden2}},
            {"length", ga.length},
            {"output_activation", "linear"}}},
          {"critic",
           {{"length", m.critic.length},
            {"channels",
             {m.critic.conv[0].out_channels(), m.critic.conv[1].out_channels(),
              m.critic.conv[2].out_channels()}},
            {"kernel", cfg.geom.kernel},
            {"stride", cfg.geom.stride},
            {"padding", cfg.geom.padding},
            {"leaky_slope", cfg.leaky_slope}}}}},
        {"storage_order", "column-major"},
        {"tensors", tensor_list(m)},
        {"score", "negated critic output"},
        {"norm", {{"mu", m.norm.mu}, {"sigma", m.norm.sigma}}},
        {"preprocess",
         {{"raw_length", m.raw_length},
          {"crop_start", m.preprocess.crop_start},
          {"crop_end", m.preprocess.crop_end},
          {"val_fraction", m.preprocess.val_fraction}}},
        {"thresholds", thresholds},
        {"train",
         {{"lambda_gp", cfg.lambda_gp},
          {"n_critic", cfg.n_critic},
          {"lr", cfg.lr},
          {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},
          {"epochs", cfg.epochs},
          {"batch", cfg.batch},
          {"latent_dim", cfg.latent_dim},
          {"seed", cfg.seed}}},
        {"history", history},
    };
}

Model from_manifest(const json &j) {
    Model m;
    const auto &arch = j.at("architecture");
    const auto &ga = arch.at("generator");
    const auto &ca = arch.at("critic");
    const auto &tr = j.at("train");

    m.train.lambda_gp = tr.at("lambda_gp").get<double>();
    m.train.n_critic = tr.at("n_critic").get<int>();
    m.train.lr = tr.at("lr").get<double>();
    m.train.beta1 = tr.at("beta1").get<double>();
    m.train.beta2 = tr.at("beta2").get<double>();
    m.train.epochs = tr.at("epochs").get<int>();
    m.train.batch = tr.at("batch").get<Index>();
    m.train.latent_dim = tr.at("latent_dim").get<Index>();
    m.train.seed = tr.at("seed").get<std::uint64_t>();
    m.train.geom = {ca.at("kernel").get<Index>(), ca.at("stride").get<Index>(),
                    ca.at("padding").get<Index>()};
    m.train.leaky_slope = ca.at("leaky_slope").get<double>();

    nn::GeneratorArch g;
    g.latent_dim = ga.at("latent_dim").get<Index>();
    const auto hidden = ga.at("hidden").get<std::vector<Index>>();
    if (hidden.size() != 2)
        throw FormatError(FormatErrc::BadManifest, "generator must list two hidden widths");
    g.hidden1 = hidden[0];
    g.hidden2 = hidden[1];
    g.length = ga.at("length").get<Index>();

    nn::CriticArch c;
    c.length = ca.at("length").get<Index>();
    const auto channels = ca.at("channels").get<std::vector<Index>>();
    if (channels.size() != 3)
        throw FormatError(FormatErrc::BadManifest, "critic must list three channel counts");
    std::copy(channels.begin(), channels.end(), c.channels.begin());
    c.geom = m.train.geom;
    c.leaky_slope = m.train.leaky_slope;

    try {
        m.generator = nn::GeneratorParams<float>::zeros(g);
        m.critic = nn::CriticParams<float>::zeros(c);
    } catch (const ShapeError &e) {
        throw FormatError(FormatErrc::ShapeMismatch, e.what());
    }

    const auto &norm = j.at("norm");
    m.norm = {norm.at("mu").get<double>(), norm.at("sigma").get<double>()};
    const auto &pre = j.at("preprocess");
    m.raw_length = pre.at("raw_length").get<Index>();
    m.preprocess = {pre.at("crop_start").get<Index>(), pre.at("crop_end").get<Index>(),
                    pre.at("val_fraction").get<double>()};
    for (const auto &t : j.at("thresholds"))
        m.thresholds.push_back({t.at("tau").get<double>(), t.at("target_fpr").get<double>(),
                                t.at("calibration_size").get<Index>()});
    const auto &h = j.at("history");
    const auto cl = h.at("critic_loss").get<std::vector<double>>();
    const auto gl = h.at("generator_loss").get<std::vector<double>>();
    const auto gp = h.at("gradient_penalty").get<std::vector<double>>();
    if (cl.size() != gl.size() || cl.size() != gp.size())
        throw FormatError(FormatErrc::BadManifest, "loss histories differ in length");
    for (std::size_t i = 0; i < cl.size(); ++i)
        m.history.push_back({cl[i], gl[i], gp[i], 0.0});
    return m;
}

} // namespace

const Threshold *Model::threshold_for(double target_fpr) const {
    for (const auto &t : thresholds)
        if (std::abs(t.target_fpr - target_fpr) <= 1e-12)
            return &t;
    return nullptr;
}

std::vector<char> encode_model(const Model &model) {
    const std::string text = manifest(model).dump();
    detail::ByteWriter w;
    w.bytes({kMagic, 4});
    w.u16(kModelFormatVersion);
    w.u32(static_cast<std::uint32_t>(text.size()));
    w.bytes(text);
    const auto write_all = [&](const auto &list) {
        for (const auto &v : list)
            for (Index i = 0; i < v.size(); ++i)
                w.f32(v.data[i]);
    };
    write_all(views(model.generator));
    write_all(views(model.critic));
    return w.data();
}

Model decode_model(std::span<const char> bytes) {
    detail::ByteReader r(bytes);
    if (r.remaining() < 4 || r.bytes(4, "magic") != std::string_view(kMagic, 4))
        throw FormatError(FormatErrc::BadMagic, "not a PSCM model file");
    const auto version = r.u16("header");
    if (version != kModelFormatVersion)
        throw FormatError(FormatErrc::VersionMismatch,
                          "unsupported PSCM version " + std::to_string(version));
    const std::uint32_t len = r.u32("header");
    const std::string text = r.bytes(len, "manifest");

    Model m;
    json listed;
    try {
        const json j = json::parse(text);
        m = from_manifest(j);
        listed = j.at("tensors");
    } catch (const json::exception &e) {
        throw FormatError(FormatErrc::BadManifest, e.what());
    }

    if (listed != tensor_list(m))
        throw FormatError(FormatErrc::ShapeMismatch,
                          "tensor list does not match the declared architecture");

    auto gen = m.generator.tensors();
    auto critic = m.critic.tensors();
    std::size_t floats = 0;
    for (const auto &v : gen)
        floats += static_cast<std::size_t>(v.size());
    for (const auto &v : critic)
        floats += static_cast<std::size_t>(v.size());
    r.need(4 * floats, "tensor blobs");
    if (r.remaining() != 4 * floats)
        throw FormatError(FormatErrc::ShapeMismatch,
                          std::to_string(r.remaining() - 4 * floats) +
                              " bytes beyond the declared tensors");
    for (auto *list : {&gen, &critic})
        for (auto &v : *list)
            for (Index i = 0; i < v.size(); ++i)
                v.data[i] = r.f32("tensor blobs");
    return m;
}

void save_model(const std::string &path, const Model &model) {
    detail::write_file(path, encode_model(model));
}

Model load_model(const std::string &path) { return decode_model(detail::read_file(path)); }

} // namespace pscreen
