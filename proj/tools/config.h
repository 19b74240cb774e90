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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "switchsim/causal.h"
#include "switchsim/pipeline.h"

namespace switchsim::cli {

/// Raised for malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::kSourceVisibility;
    std::vector<double> grid;
};

struct CausalSpec {
    /// "z_basis", "x_basis", "random" or "unitary".
    std::string instruments = "random";
    int configurations = 20;
    /// Control amplitudes; empty means random controls per configuration.
    std::optional<Eigen::Vector2cd> control;
    std::string target = "H";
};

struct RunConfig {
    ExperimentConfig experiment;
    /// If set, the source visibility is tuned so the expected control CHSH
    /// equals this value before anything else runs.
    std::optional<double> calibrate_control_chsh;
    int calibration_samples = 200;
    int runs = 20;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> out_dir;
    SweepSpec sweep;
    CausalSpec causal;
    std::string gpt_fixtures;  // empty: look next to the data directory

    /// Canonical JSON of the effective configuration (hashed into reports).
    nlohmann::json effective;
};

/// Parses JSON config text. Syntax errors report the line and column;
/// semantic errors report the field path and its line.
RunConfig parse_config(const std::string &text, const std::string &source_name = "<config>");
RunConfig load_config(const std::filesystem::path &path);
RunConfig default_config();

/// Stable 64-bit FNV-1a hash of the canonical JSON, as 16 hex digits.
std::string config_hash(const nlohmann::json &effective);

/// Gate by preset name or as a 2×2 matrix of [re, im] pairs.
GateSpec parse_gate(const nlohmann::json &j, const std::string &field);

}  // namespace switchsim::cli
