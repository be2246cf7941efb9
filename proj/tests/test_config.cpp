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

#include <pscreen/config.hpp>

#include "gtest/gtest.h"

using namespace pscreen;

TEST(Profiles, DeskNumbers) {
    const ToolkitConfig c = profile_config("desk");
    EXPECT_EQ(c.sim.raw_len, 600);
    EXPECT_EQ(c.preprocess.crop_end - c.preprocess.crop_start, 256);
    EXPECT_EQ(c.n_benign, 1000);
    EXPECT_EQ(static_cast<Index>(c.n_benign * (1.0 - c.preprocess.val_fraction)), 800);
    EXPECT_EQ(c.n_scenario, 500);
    EXPECT_EQ(c.train.epochs, 80);
    EXPECT_EQ(c.train.batch, 64);
    EXPECT_NO_THROW(c.validate());
}

TEST(Profiles, FullScaleNumbers) {
    const ToolkitConfig c = profile_config("paper");
    EXPECT_EQ(c.sim.raw_len, 3000);
    EXPECT_EQ(c.preprocess.crop_start, 500);
    EXPECT_EQ(c.preprocess.crop_end, 2000);
    EXPECT_EQ(c.n_benign, 2000);
    EXPECT_EQ(c.train.epochs, 400);
    EXPECT_EQ(c.train.batch, 128);
    EXPECT_EQ(c.train.lambda_gp, 10.0);
    EXPECT_EQ(c.train.n_critic, 5);
    EXPECT_EQ(c.train.lr, 1e-4);
    EXPECT_EQ(c.train.latent_dim, 100);
    EXPECT_EQ(c.target_fprs, (std::vector<double>{0.01, 0.05}));
    EXPECT_NO_THROW(c.validate());
}

TEST(Profiles, UnknownNameRejected) {
    EXPECT_THROW(profile_config("laptop"), ConfigError);
    EXPECT_EQ(profile_names(), (std::vector<std::string>{"paper", "desk"}));
}

TEST(ConfigText, WriteThenParseRoundTrips) {
    for (const char *name : {"paper", "desk"}) {
        ToolkitConfig c = profile_config(name);
        c.train.lr = 1.0 / 3.0;
        c.payload.bitflip.perturb_amplitude = 0.0123456789012345;
        c.plaintext = PlaintextMode::Random;
        c.target_fprs = {0.02, 0.1, 0.5};
        c.paths.model = "models/a b.pscm";
        const std::string text = write_config(c);
        const ToolkitConfig back = parse_config(text, ToolkitConfig{});
        EXPECT_EQ(write_config(back), text) << name;
        EXPECT_EQ(back.train.lr, c.train.lr);
        EXPECT_EQ(back.payload.bitflip.perturb_amplitude, c.payload.bitflip.perturb_amplitude);
        EXPECT_EQ(back.plaintext, PlaintextMode::Random);
        EXPECT_EQ(back.paths.model, "models/a b.pscm");
    }
}

TEST(ConfigText, OverridesOnlyListedKeys) {
    const ToolkitConfig base = profile_config("desk");
    const ToolkitConfig c = parse_config("# tweak\n\ntrain.lambda_gp = 5  # lighter\n"
                                         "  sim.noise_sigma=0.02\n"
                                         "calibrate.target_fprs = 0.01, 0.1\n",
                                         base);
    EXPECT_EQ(c.train.lambda_gp, 5.0);
    EXPECT_EQ(c.sim.noise_sigma, 0.02);
    EXPECT_EQ(c.target_fprs, (std::vector<double>{0.01, 0.1}));
    EXPECT_EQ(c.train.epochs, base.train.epochs);
    EXPECT_EQ(c.sim.raw_len, base.sim.raw_len);
}

TEST(ConfigText, UnknownKeyNamesTheLine) {
    try {
        parse_config("train.lr = 0.001\ntrain.lamda_gp = 10\n", ToolkitConfig{});
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("train.lamda_gp"), std::string::npos);
    }
}

TEST(ConfigText, MalformedLines) {
    EXPECT_THROW(parse_config("train.lr\n", ToolkitConfig{}), ConfigError);
    EXPECT_THROW(parse_config("train.lr = fast\n", ToolkitConfig{}), ConfigError);
    EXPECT_THROW(parse_config("train.epochs = 1.5\n", ToolkitConfig{}), ConfigError);
    EXPECT_THROW(parse_config("sim.plaintext_mode = chosen\n", ToolkitConfig{}), ConfigError);
    EXPECT_THROW(parse_config("payload.trojan.trigger_byte = 0x1ff\n", ToolkitConfig{}), ConfigError);
    EXPECT_THROW(parse_config("sim.key = 00ff\n", ToolkitConfig{}), ConfigError);
}

TEST(ConfigText, SeedOverrideTouchesBothStreams) {
    ToolkitConfig c = profile_config("desk");
    apply_seed(c, 99);
    EXPECT_EQ(c.sim.seed, 99u);
    EXPECT_EQ(c.train.seed, 99u);
}

TEST(ConfigValidate, RejectsInconsistentSettings) {
    ToolkitConfig c = profile_config("desk");
    c.preprocess.crop_end = 700;
    EXPECT_THROW(c.validate(), Error);
    c = profile_config("desk");
    c.preprocess.val_fraction = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = profile_config("desk");
    c.target_fprs = {};
    EXPECT_THROW(c.validate(), ConfigError);
    c = profile_config("desk");
    c.train.batch = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = profile_config("desk");
    c.sim.noise_sigma = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
}
