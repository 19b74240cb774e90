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

#include "switchsim/switch_model.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "switchsim/tolerances.h"

namespace switchsim {

SwitchGates entangling_gates() {
    return {gate_preset("sigma_z"), gate_preset("sqrt_iX")};
}

Eigen::Matrix4cd switch_unitary(const SwitchGates &gates) {
    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    Eigen::Matrix2cd a_then_b = gates.u_b.matrix * gates.u_a.matrix;
    Eigen::Matrix2cd b_then_a = gates.u_a.matrix * gates.u_b.matrix;
    return kron(a_then_b, p0) + kron(b_then_a, p1);
}

StateVector single_switch(const StateVector &control, const StateVector &target, const SwitchGates &gates) {
    if (control.num_qubits() != 1 || target.num_qubits() != 1) {
        throw std::invalid_argument("single_switch: control and target must be single qubits");
    }
    StateVector in = tensor(target, control);
    return StateVector(switch_unitary(gates) * in.amplitudes(), in.labels());
}

DensityOperator entangled_switch(const DensityOperator &control_joint, const DensityOperator &target_joint,
                                 const SwitchGates &g1, const SwitchGates &g2) {
    if (control_joint.num_qubits() != 2 || target_joint.num_qubits() != 2) {
        throw std::invalid_argument("entangled_switch: expected two-qubit control and target states");
    }
    const auto &tl = target_joint.labels();
    const auto &cl = control_joint.labels();
    DensityOperator in = reorder(tensor(target_joint, control_joint), {tl[0], cl[0], tl[1], cl[1]});
    Eigen::MatrixXcd w = kron(switch_unitary(g1), switch_unitary(g2));
    Eigen::MatrixXcd out = w * in.matrix() * w.adjoint();
    return DensityOperator((out + out.adjoint()) / 2.0, in.labels());
}

DensityOperator switch_input_controls() {
    Eigen::Vector4cd phi_minus(1, 0, 0, -1);
    return DensityOperator::from_pure(StateVector(phi_minus / std::sqrt(2.0), {kC1, kC2}));
}

DensityOperator switch_input_targets() {
    return DensityOperator::from_pure(StateVector::basis("00", {kT1, kT2}));
}

StateVector ideal_target_state() {
    StateVector ll = tensor(StateVector::qubit('l', kT1), StateVector::qubit('l', kT2));
    StateVector rr = tensor(StateVector::qubit('r', kT1), StateVector::qubit('r', kT2));
    return StateVector((ll.amplitudes() - rr.amplitudes()) / std::sqrt(2.0), {kT1, kT2});
}

double wrap_phase(double phase) {
    constexpr double two_pi = 2 * std::numbers::pi;
    double w = std::fmod(phase, two_pi);
    if (w < 0) {
        w += two_pi;
    }
    return w >= two_pi ? 0.0 : w;
}

namespace {

Eigen::RowVector2cd basis_bra(Sign s, double phase) {
    // ⟨b| for |b⟩ = (|0⟩ ± e^{−iφ}|1⟩)/√2.
    const cplx i{0, 1};
    double sign = s == Sign::kPlus ? 1.0 : -1.0;
    Eigen::RowVector2cd bra;
    bra << 1.0, sign * std::exp(i * wrap_phase(phase));
    return bra / std::sqrt(2.0);
}

}  // namespace

PostselectionResult postselect_controls(const DensityOperator &state, const PostselectionOutcome &outcome) {
    if (state.num_qubits() != 4) {
        throw std::invalid_argument("postselect_controls: expected a four-qubit state");
    }
    DensityOperator canon = reorder(state, {kT1, kC1, kT2, kC2});
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd k = kron(kron(kron(id, basis_bra(outcome.c1, outcome.phase1)), id), basis_bra(outcome.c2, outcome.phase2));
    Eigen::MatrixXcd target = k * canon.matrix() * k.adjoint();
    target = (target + target.adjoint()) / 2.0;
    PostselectionResult result;
    result.probability = target.trace().real();
    if (result.probability >= tol::kUnreachable) {
        result.state = DensityOperator(target / result.probability, {kT1, kT2});
    }
    return result;
}

}  // namespace switchsim
