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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "config.h"
#include "json.hpp"

namespace switchsim::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> n_counts;
    std::optional<int> runs;
};

using EnvLookup = std::function<std::optional<std::string>(const char *)>;

std::optional<std::string> process_env(const char *name);

/// Flags win over SWITCHSIM_SEED / SWITCHSIM_OUT, which win over the file.
/// Throws ConfigError on malformed environment values.
void apply_overrides(RunConfig &cfg, const Overrides &flags, const EnvLookup &env = process_env);

struct CommandResult {
    int exit_code = kExitPass;
    nlohmann::json report;
};

CommandResult cmd_simulate(RunConfig cfg);
CommandResult cmd_sweep(const RunConfig &cfg);
CommandResult cmd_tomo(const RunConfig &cfg);

struct GptCheckOptions {
    /// fixtures.json describing joint/product tables and uncertainties.
    std::optional<std::filesystem::path> tables;
    bool simulate = false;
    /// With simulate: "product" (target input state) or "entangled" (|Φ⁻⟩).
    std::string simulate_target = "product";
    int bootstrap_resamples = 200;
};

CommandResult cmd_gpt_check(const RunConfig &cfg, const GptCheckOptions &options);
CommandResult cmd_causal_check(const RunConfig &cfg);

/// Default location of the shipped fixture tables.
std::filesystem::path default_fixtures_path();

}  // namespace switchsim::cli
