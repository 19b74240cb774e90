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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace switchsim {

/// A named single-qubit unitary.
struct GateSpec {
    std::string name;
    Eigen::Matrix2cd matrix;

    /// Throws std::invalid_argument unless U†U = 𝟙 within tol::kAlgebraic.
    static GateSpec make(std::string name, const Eigen::Matrix2cd &matrix);
};

/// Named presets: "identity", "sigma_x", "sigma_y", "sigma_z", "hadamard",
/// and "sqrt_iX" = (𝟙 + iσx)/√2. Throws std::invalid_argument otherwise.
GateSpec gate_preset(const std::string &name);
std::vector<std::string> gate_preset_names();

/// U₂U₁ with a composed name.
GateSpec compose(const GateSpec &second, const GateSpec &first);

}  // namespace switchsim
