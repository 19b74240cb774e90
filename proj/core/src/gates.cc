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

#include "switchsim/gates.h"

#include <cmath>
#include <stdexcept>

#include "switchsim/linalg.h"
#include "switchsim/tolerances.h"

namespace switchsim {

GateSpec GateSpec::make(std::string name, const Eigen::Matrix2cd &matrix) {
    if (!matrix.allFinite()) {
        throw std::invalid_argument("gate '" + name + "' has non-finite entries");
    }
    double dev = (matrix.adjoint() * matrix - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (dev > tol::kAlgebraic) {
        throw std::invalid_argument("gate '" + name + "' is not unitary (max |U^dag U - 1| = " + std::to_string(dev) + ")");
    }
    return GateSpec{std::move(name), matrix};
}

GateSpec gate_preset(const std::string &name) {
    const cplx i{0, 1};
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    if (name == "identity") {
        return GateSpec::make(name, id);
    }
    if (name == "sigma_x") {
        return GateSpec::make(name, pauli_x());
    }
    if (name == "sigma_y") {
        return GateSpec::make(name, pauli_y());
    }
    if (name == "sigma_z") {
        return GateSpec::make(name, pauli_z());
    }
    if (name == "hadamard") {
        return GateSpec::make(name, (pauli_x() + pauli_z()) / std::sqrt(2.0));
    }
    if (name == "sqrt_iX") {
        return GateSpec::make(name, (id + i * pauli_x()) / std::sqrt(2.0));
    }
    throw std::invalid_argument("unknown gate preset '" + name + "'");
}

std::vector<std::string> gate_preset_names() {
    return {"identity", "sigma_x", "sigma_y", "sigma_z", "hadamard", "sqrt_iX"};
}

GateSpec compose(const GateSpec &second, const GateSpec &first) {
    return GateSpec{second.name + "*" + first.name, second.matrix * first.matrix};
}

}  // namespace switchsim
