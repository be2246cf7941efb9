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

// Command-line front end: simulate | enroll | screen | evaluate | report.
//
// Exit codes: 0 success / all approved, 2 usage or input error, 3 training
// failure, 4 at least one trace flagged.

#include <pscreen/config.hpp>
#include <pscreen/pipeline.hpp>
#include <pscreen/report.hpp>
#include <pscreen/scoring.hpp>
#include <pscreen/trace_io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pscreen;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTraining = 3;
constexpr int kExitFlagged = 4;

std::string join(const std::vector<std::string> &items) {
    std::string s;
    for (const auto &i : items)
        s += (s.empty() ? "" : ", ") + i;
    return s;
}

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string profile = "paper";
    bool dump_config = false;
};

ToolkitConfig effective_config(const Globals &g) {
    ToolkitConfig cfg = profile_config(g.profile);
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in)
            throw ConfigError("cannot read config file " + g.config_path);
        std::stringstream text;
        text << in.rdbuf();
        cfg = parse_config(text.str(), cfg);
    }
    if (g.seed)
        apply_seed(cfg, *g.seed);
    cfg.validate();
    return cfg;
}

struct SimulateArgs {
    std::string scenario;
    std::optional<Index> n;
    std::string out;
    std::string csv;
    std::uint64_t first_index = 0;
};

int cmd_simulate(const ToolkitConfig &cfg, const SimulateArgs &a) {
    const auto &names = scenario_names();
    if (std::find(names.begin(), names.end(), a.scenario) == names.end()) {
        std::cerr << "error: unknown scenario '" << a.scenario << "'; valid scenarios: "
                  << join(names) << "\n";
        return kExitUsage;
    }
    const Index n = a.n.value_or(a.scenario == kBenignLabel ? cfg.n_benign : cfg.n_scenario);
    const TraceSet set = simulate_scenario(cfg, a.scenario, n, a.first_index);
    write_traceset(set, a.out);
    if (!a.csv.empty())
        write_traceset_csv(set, a.csv);
    std::cerr << "wrote " << set.size() << " " << a.scenario << " traces of " << set.length()
              << " samples to " << a.out << "\n";
    return kExitOk;
}

struct EnrollArgs {
    std::string input;
    std::string out;
    std::string val_out;
    bool verbose = false;
};

int cmd_enroll(const ToolkitConfig &cfg, const EnrollArgs &a) {
    const TraceSet benign = read_traceset(a.input);
    const Enrollment en = enroll(benign, cfg, [&](int epoch, const nn::EpochLog &l) {
        if (a.verbose || epoch == cfg.train.epochs)
            std::fprintf(stderr, "epoch %d/%d critic %.6g generator %.6g penalty %.6g (%.1fs)\n",
                         epoch, cfg.train.epochs, l.critic_loss, l.generator_loss,
                         l.gradient_penalty, l.wall_seconds);
    });
    save_model(a.out.empty() ? cfg.paths.model : a.out, en.model);
    if (!a.val_out.empty())
        write_traceset(en.validation, a.val_out);
    for (const auto &t : en.model.thresholds)
        std::fprintf(stderr, "tau@%g = %.9g (calibrated on %lld validation traces)\n",
                     t.target_fpr, t.tau, static_cast<long long>(t.calibration_size));
    return kExitOk;
}

struct ScreenArgs {
    std::string model;
    std::string input;
    double fpr = 0.05;
    std::string out;
};

int cmd_screen(const ToolkitConfig &cfg, const ScreenArgs &a) {
    const Model model = load_model(a.model.empty() ? cfg.paths.model : a.model);
    const Threshold *tau = model.threshold_for(a.fpr);
    if (tau == nullptr) {
        std::vector<std::string> available;
        for (const auto &t : model.thresholds) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", t.target_fpr);
            available.emplace_back(buf);
        }
        std::cerr << "error: no threshold for FPR " << a.fpr
                  << " in the model; available FPRs: " << join(available) << "\n";
        return kExitUsage;
    }
    const TraceSet set = read_traceset(a.input);
    const auto decisions = batch_screen(set, model, *tau);
    if (!a.out.empty())
        write_decisions_csv(decisions, a.out);
    const auto flagged = std::count_if(decisions.begin(), decisions.end(),
                                       [](const auto &d) { return d.outcome == Outcome::Flag; });
    std::cerr << flagged << " of " << decisions.size() << " traces flagged at tau@" << a.fpr
              << " = " << tau->tau << "\n";
    return flagged > 0 ? kExitFlagged : kExitOk;
}

struct EvaluateArgs {
    std::string model;
    std::string benign;
    std::vector<std::string> scenarios;
    std::string out_dir;
};

int cmd_evaluate(const ToolkitConfig &cfg, const EvaluateArgs &a) {
    const Model model = load_model(a.model.empty() ? cfg.paths.model : a.model);
    const TraceSet benign = read_traceset(a.benign);
    std::vector<std::pair<std::string, TraceSet>> sets;
    for (const auto &arg : a.scenarios) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
            std::cerr << "error: --scenario expects NAME=PATH, got '" << arg << "'\n";
            return kExitUsage;
        }
        sets.emplace_back(arg.substr(0, eq), read_traceset(arg.substr(eq + 1)));
    }
    EvalOptions opt;
    opt.fprs = cfg.target_fprs;
    const Evaluation ev = evaluate(model, benign, sets, opt);
    const std::string dir = a.out_dir.empty() ? cfg.paths.eval_dir : a.out_dir;
    write_evaluation(ev, dir);
    for (const auto &r : ev.metrics)
        std::fprintf(stderr, "%-10s auc %.4f tpr@1%% %.4f tpr@5%% %.4f\n", r.scenario.c_str(),
                     r.auc, r.tpr_at_1, r.tpr_at_5);
    std::cerr << "wrote evaluation to " << dir << "\n";
    return kExitOk;
}

struct ReportArgs {
    std::string eval_dir;
    std::string out_dir;
};

int cmd_report(const ToolkitConfig &cfg, const ReportArgs &a) {
    const std::string eval_dir = a.eval_dir.empty() ? cfg.paths.eval_dir : a.eval_dir;
    const std::string out_dir = a.out_dir.empty() ? eval_dir : a.out_dir;
    render_report(eval_dir, out_dir);
    std::cerr << "wrote " << join(report_figures()) << " to " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"pscreen: power side-channel screening with a one-class WGAN-GP critic"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    Globals g;
    app.add_option("--config", g.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "override simulator and training seeds");
    app.add_option("--profile", g.profile, "base profile")->check(CLI::IsMember(profile_names()));
    app.add_flag("--dump-config", g.dump_config, "print the effective configuration and exit");

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "generate a synthetic trace set");
    simulate->add_option("--scenario", sim.scenario, join(scenario_names()))->required();
    simulate->add_option("--n", sim.n, "number of traces (profile default if omitted)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out, "output PSCT file")->required();
    simulate->add_option("--csv", sim.csv, "also write a CSV export");
    simulate->add_option("--first-index", sim.first_index, "index of the first trace");

    EnrollArgs en;
    auto *enroll_cmd = app.add_subcommand("enroll", "train the critic and calibrate thresholds");
    enroll_cmd->add_option("--input", en.input, "benign PSCT file")->required();
    enroll_cmd->add_option("--out", en.out, "output model (paths.model if omitted)");
    enroll_cmd->add_option("--val-out", en.val_out, "write the held-out benign traces here");
    enroll_cmd->add_flag("--verbose", en.verbose, "log every epoch");

    ScreenArgs sc;
    auto *screen_cmd = app.add_subcommand("screen", "approve or flag traces");
    screen_cmd->add_option("--model", sc.model, "model file (paths.model if omitted)");
    screen_cmd->add_option("--input", sc.input, "PSCT file to screen")->required();
    screen_cmd->add_option("--fpr", sc.fpr, "calibrated false-positive rate to use");
    screen_cmd->add_option("--out", sc.out, "decisions CSV");

    EvaluateArgs ev;
    auto *evaluate_cmd = app.add_subcommand("evaluate", "detection metrics and figure data");
    evaluate_cmd->add_option("--model", ev.model, "model file (paths.model if omitted)");
    evaluate_cmd->add_option("--benign", ev.benign, "benign validation PSCT file")->required();
    evaluate_cmd->add_option("--scenario", ev.scenarios, "NAME=PATH, repeatable")->required();
    evaluate_cmd->add_option("--out-dir", ev.out_dir, "output directory (paths.eval_dir if omitted)");

    ReportArgs rp;
    auto *report_cmd = app.add_subcommand("report", "render SVG figures from an evaluation");
    report_cmd->add_option("--eval-dir", rp.eval_dir, "evaluation directory");
    report_cmd->add_option("--out-dir", rp.out_dir, "output directory (eval dir if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const ToolkitConfig cfg = effective_config(g);
        if (g.dump_config) {
            std::cout << write_config(cfg);
            return kExitOk;
        }
        if (simulate->parsed())
            return cmd_simulate(cfg, sim);
        if (enroll_cmd->parsed())
            return cmd_enroll(cfg, en);
        if (screen_cmd->parsed())
            return cmd_screen(cfg, sc);
        if (evaluate_cmd->parsed())
            return cmd_evaluate(cfg, ev);
        if (report_cmd->parsed())
            return cmd_report(cfg, rp);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const DivergedTrainingError &e) {
        std::cerr << "training failed: " << e.what() << "\n";
        return kExitTraining;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
