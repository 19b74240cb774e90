// Copyright 2026 The switchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "switchsim/version.h"

using namespace switchsim::cli;

int main(int argc, char **argv) {
    CLI::App app{"switchsim: entangled quantum SWITCH simulator"};
    app.set_version_flag("--version", SWITCHSIM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    Overrides flags;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "master seed (overrides SWITCHSIM_SEED)");
        sub->add_option("--out", flags.out, "output directory (overrides SWITCHSIM_OUT)");
        sub->add_option("--n-counts", flags.n_counts, "counts per measurement setting, 0 for exact probabilities");
        sub->add_option("--runs", flags.runs, "Monte Carlo repetitions")->check(CLI::Range(2, 1000000));
    };

    auto *simulate = app.add_subcommand("simulate", "run the experiment pipeline with Monte Carlo errors");
    auto *sweep = app.add_subcommand("sweep", "Bell parameter against a visibility");
    auto *tomo = app.add_subcommand("tomo", "simulate and reconstruct input and output target states");
    auto *gpt = app.add_subcommand("gpt-check", "product-state tests on fixture or simulated tables");
    auto *causal = app.add_subcommand("causal-check", "causal decomposition of SWITCH behaviors");
    for (auto *sub : {simulate, sweep, tomo, gpt, causal}) {
        add_common(sub);
    }
    std::string axis;
    sweep->add_option("--axis", axis, "source_visibility, ifo1 or ifo_both (overrides the config)");
    GptCheckOptions gpt_options;
    gpt->add_option("--tables", gpt_options.tables, "fixtures JSON listing the probability tables")
        ->check(CLI::ExistingFile);
    gpt->add_flag("--simulate", gpt_options.simulate, "simulate the tables instead of reading them");
    gpt->add_option("--simulate-target", gpt_options.simulate_target, "product or entangled");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfigError;
    }

    CommandResult result;
    try {
        RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
        apply_overrides(cfg, flags);
        if (!axis.empty()) {
            try {
                cfg.sweep.axis = switchsim::parse_sweep_axis(axis);
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("--axis: ") + e.what());
            }
            cfg.effective["sweep"]["axis"] = axis;
        }
        if (*simulate) {
            result = cmd_simulate(cfg);
        } else if (*sweep) {
            result = cmd_sweep(cfg);
        } else if (*tomo) {
            result = cmd_tomo(cfg);
        } else if (*gpt) {
            result = cmd_gpt_check(cfg, gpt_options);
        } else {
            result = cmd_causal_check(cfg);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    std::cout << result.report.dump(2) << '\n';
    return result.exit_code;
}
