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

#include <optional>

#include "switchsim/gates.h"
#include "switchsim/linalg.h"

namespace switchsim {

// Canonical subsystem tags of the entangled double SWITCH.
inline constexpr const char *kT1 = "T1";
inline constexpr const char *kC1 = "C1";
inline constexpr const char *kT2 = "T2";
inline constexpr const char *kC2 = "C2";

/// Alice's and Bob's gates inside one SWITCH.
struct SwitchGates {
    GateSpec u_a;
    GateSpec u_b;
};

/// U_A = σz, U_B = (𝟙 + iσx)/√2: the non-commuting pair that maps the
/// entangled controls onto a maximally entangled target pair.
SwitchGates entangling_gates();

/// The controlled-composition isometry on (target ⊗ control):
/// U_B U_A ⊗ |0⟩⟨0| + U_A U_B ⊗ |1⟩⟨1|.
Eigen::Matrix4cd switch_unitary(const SwitchGates &gates);

/// One SWITCH acting on a product of control and target. The output register
/// is (target, control): α (U_B U_A t)⊗|0⟩ + β (U_A U_B t)⊗|1⟩.
StateVector single_switch(const StateVector &control, const StateVector &target, const SwitchGates &gates);

/// Two SWITCHes fed by a joint control state and a joint target state.
/// The first tag of each input belongs to SWITCH 1. The output register is
/// ordered (target₁, control₁, target₂, control₂).
DensityOperator entangled_switch(const DensityOperator &control_joint, const DensityOperator &target_joint,
                                 const SwitchGates &g1, const SwitchGates &g2);

/// Targets |0⟩|0⟩ on (T1, T2) and controls (|00⟩ − |11⟩)/√2 on (C1, C2).
DensityOperator switch_input_controls();
DensityOperator switch_input_targets();

/// (|ll⟩ − |rr⟩)/√2 on (T1, T2), with |l⟩ = (|0⟩ + i|1⟩)/√2 and
/// |r⟩ = (|0⟩ − i|1⟩)/√2.
StateVector ideal_target_state();

enum class Sign { kPlus, kMinus };

/// One outcome of measuring both controls in {(|0⟩ ± e^{−iφᵢ}|1⟩)/√2}.
struct PostselectionOutcome {
    Sign c1 = Sign::kPlus;
    Sign c2 = Sign::kPlus;
    double phase1 = 0;
    double phase2 = 0;
};

/// Wraps an angle into [0, 2π).
double wrap_phase(double phase);

struct PostselectionResult {
    /// Normalised conditional (T1, T2) state; empty for unreachable branches.
    std::optional<DensityOperator> state;
    double probability = 0;

    bool reachable() const {
        return state.has_value();
    }
};

/// Projects C1 and C2 onto the outcome basis vectors and returns the
/// conditional target state with its probability. The input must carry the
/// tags T1, C1, T2, C2 (any order).
PostselectionResult postselect_controls(const DensityOperator &state, const PostselectionOutcome &outcome);

}  // namespace switchsim
