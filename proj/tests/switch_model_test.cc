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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracle_values.h"
#include "switchsim/switch_model.h"
#include "test_util.h"

namespace switchsim {
namespace {

using testing::random_density;
using testing::random_pure;
using testing::random_unitary;

StateVector ket(char name, const char *label) {
    return StateVector::qubit(name, label);
}

double overlap(const StateVector &a, const StateVector &b) {
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

SwitchGates identity_gates() {
    return {gate_preset("identity"), gate_preset("identity")};
}

SwitchGates sigma_z_gates() {
    return {gate_preset("sigma_z"), gate_preset("sigma_z")};
}

PostselectionOutcome outcome(Sign a, Sign b) {
    PostselectionOutcome o;
    o.c1 = a;
    o.c2 = b;
    return o;
}

DensityOperator ideal_output() {
    return entangled_switch(switch_input_controls(), switch_input_targets(), entangling_gates(), entangling_gates());
}

TEST(SingleSwitch, ControlZeroAppliesAThenB) {
    StateVector out = single_switch(ket('0', "C"), ket('0', "T"), entangling_gates());
    EXPECT_EQ(out.labels(), (Labels{"T", "C"}));
    EXPECT_NEAR(overlap(out, tensor(ket('l', "T"), ket('0', "C"))), 1.0, 1e-12);
}

TEST(SingleSwitch, IdentityGatesLeaveInputUnchanged) {
    Rng rng = make_stream(1);
    StateVector t = random_pure(rng, {"T"});
    StateVector out = single_switch(ket('1', "C"), t, identity_gates());
    EXPECT_NEAR(overlap(out, tensor(t, ket('1', "C"))), 1.0, 1e-12);
}

TEST(SingleSwitch, SuperposedControl) {
    StateVector out = single_switch(ket('+', "C"), ket('0', "T"), entangling_gates());
    Eigen::VectorXcd expect = (tensor(ket('l', "T"), ket('0', "C")).amplitudes() +
                               tensor(ket('r', "T"), ket('1', "C")).amplitudes()) /
                              std::sqrt(2.0);
    EXPECT_NEAR(std::abs(out.amplitudes().dot(expect)), 1.0, 1e-12);
    DensityOperator target = partial_trace(DensityOperator::from_pure(out), {"T"});
    EXPECT_LT((target.matrix() - Eigen::Matrix2cd::Identity() / 2.0).norm(), 1e-12);
}

TEST(SingleSwitch, RejectsMultiQubitInputs) {
    EXPECT_THROW(single_switch(StateVector::basis("00", {"C", "D"}), ket('0', "T"), entangling_gates()),
                 std::invalid_argument);
}

TEST(EntangledSwitch, IdealInputGivesTwoBranchSuperposition) {
    DensityOperator out = ideal_output();
    ASSERT_EQ(out.labels(), (Labels{kT1, kC1, kT2, kC2}));
    StateVector branch0 = tensor(tensor(ket('l', kT1), ket('0', kC1)), tensor(ket('l', kT2), ket('0', kC2)));
    StateVector branch1 = tensor(tensor(ket('r', kT1), ket('1', kC1)), tensor(ket('r', kT2), ket('1', kC2)));
    StateVector expect((branch0.amplitudes() - branch1.amplitudes()) / std::sqrt(2.0), branch0.labels());
    EXPECT_NEAR(fidelity(out, expect), 1.0, 1e-12);
}

TEST(EntangledSwitch, DefiniteOrderControlsActAsFixedCircuit) {
    DensityOperator controls = DensityOperator::from_pure(StateVector::basis("00", {kC1, kC2}));
    DensityOperator out = entangled_switch(controls, switch_input_targets(), entangling_gates(), entangling_gates());
    Eigen::Matrix2cd ab = entangling_gates().u_b.matrix * entangling_gates().u_a.matrix;
    StateVector t(ab * Eigen::Vector2cd(1, 0), {kT1});
    StateVector expect = tensor(tensor(t, ket('0', kC1)), tensor(t.relabeled({kT2}), ket('0', kC2)));
    EXPECT_NEAR(fidelity(out, expect), 1.0, 1e-12);
}

TEST(EntangledSwitch, InputValidation) {
    EXPECT_THROW(entangled_switch(DensityOperator::maximally_mixed({kC1}), switch_input_targets(), entangling_gates(),
                                  entangling_gates()),
                 std::invalid_argument);
}

TEST(Postselect, IdealBranchesAndProbabilities) {
    DensityOperator out = ideal_output();
    StateVector ideal = ideal_target_state();
    StateVector plus_state = [] {
        StateVector ll = tensor(StateVector::qubit('l', kT1), StateVector::qubit('l', kT2));
        StateVector rr = tensor(StateVector::qubit('r', kT1), StateVector::qubit('r', kT2));
        return StateVector((ll.amplitudes() + rr.amplitudes()) / std::sqrt(2.0), {kT1, kT2});
    }();
    for (Sign a : {Sign::kPlus, Sign::kMinus}) {
        for (Sign b : {Sign::kPlus, Sign::kMinus}) {
            PostselectionResult r = postselect_controls(out, outcome(a, b));
            ASSERT_TRUE(r.reachable());
            EXPECT_NEAR(r.probability, oracle::kIdealProbability, 1e-12);
            const StateVector &expect = a == b ? ideal : plus_state;
            EXPECT_NEAR(fidelity(*r.state, expect), 1.0, 1e-12);
        }
    }
    PostselectionResult pp = postselect_controls(out, outcome(Sign::kPlus, Sign::kPlus));
    EXPECT_NEAR(fidelity(*pp.state, ideal), oracle::kIdealFidelity, 1e-12);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            EXPECT_NEAR(std::abs(pp.state->matrix()(r, c)), oracle::kIdealTargetReal[r][c], 1e-12);
        }
    }
}

TEST(Postselect, DefiniteOrderOutcomesAreUnbiased) {
    DensityOperator controls = DensityOperator::from_pure(StateVector::basis("00", {kC1, kC2}));
    DensityOperator out = entangled_switch(controls, switch_input_targets(), entangling_gates(), entangling_gates());
    StateVector ordered = tensor(ket('l', kT1), ket('l', kT2));
    for (Sign a : {Sign::kPlus, Sign::kMinus}) {
        for (Sign b : {Sign::kPlus, Sign::kMinus}) {
            PostselectionResult r = postselect_controls(out, outcome(a, b));
            EXPECT_NEAR(r.probability, 0.25, 1e-12);
            EXPECT_NEAR(fidelity(*r.state, ordered), 1.0, 1e-12);
        }
    }
}

TEST(Postselect, CommutingGatesMatchOracle) {
    DensityOperator out = entangled_switch(switch_input_controls(), switch_input_targets(), sigma_z_gates(),
                                           sigma_z_gates());
    int k = 0;
    for (Sign a : {Sign::kPlus, Sign::kMinus}) {
        for (Sign b : {Sign::kPlus, Sign::kMinus}) {
            PostselectionResult r = postselect_controls(out, outcome(a, b));
            EXPECT_NEAR(r.probability, oracle::kCommutingProbabilities[k], 1e-12);
            EXPECT_EQ(r.reachable(), oracle::kCommutingProbabilities[k] > 0);
            if (r.reachable()) {
                EXPECT_NEAR(concurrence(*r.state), oracle::kCommutingConcurrence, 1e-10);
            }
            ++k;
        }
    }
}

TEST(Postselect, PhaseShiftsTheBasis) {
    // A π phase on one control basis swaps + and −.
    DensityOperator out = ideal_output();
    PostselectionOutcome o = outcome(Sign::kPlus, Sign::kPlus);
    o.phase1 = std::numbers::pi;
    PostselectionResult shifted = postselect_controls(out, o);
    PostselectionResult minus = postselect_controls(out, outcome(Sign::kMinus, Sign::kPlus));
    EXPECT_LT((shifted.state->matrix() - minus.state->matrix()).norm(), 1e-12);
}

TEST(Postselect, InputValidation) {
    EXPECT_THROW(postselect_controls(switch_input_controls(), {}), std::invalid_argument);
}

TEST(WrapPhase, StaysInRange) {
    for (double x : {-7.0, -1e-18, 0.0, 3.0, 2 * std::numbers::pi, 13.0, 1e6}) {
        double w = wrap_phase(x);
        EXPECT_GE(w, 0.0);
        EXPECT_LT(w, 2 * std::numbers::pi);
        EXPECT_NEAR(std::cos(w), std::cos(x), 1e-9);
    }
}

// Invariants.

TEST(SwitchInvariants, SingleSwitchIsLinear) {
    Rng rng = make_stream(201);
    for (int k = 0; k < 100; ++k) {
        SwitchGates g{GateSpec::make("a", random_unitary(rng)), GateSpec::make("b", random_unitary(rng))};
        StateVector c1 = random_pure(rng, {"C"}), c2 = random_pure(rng, {"C"});
        StateVector t1 = random_pure(rng, {"T"}), t2 = random_pure(rng, {"T"});
        cplx alpha = testing::random_vector(rng, 1)(0) * 0.7, beta = testing::random_vector(rng, 1)(0) * 1.3;
        StateVector t_mix(alpha * t1.amplitudes() + beta * t2.amplitudes(), {"T"});
        StateVector c_mix(alpha * c1.amplitudes() + beta * c2.amplitudes(), {"C"});
        Eigen::VectorXcd lhs_t = single_switch(c1, t_mix, g).amplitudes();
        Eigen::VectorXcd rhs_t = alpha * single_switch(c1, t1, g).amplitudes() + beta * single_switch(c1, t2, g).amplitudes();
        ASSERT_LT((lhs_t - rhs_t).norm(), 1e-10);
        Eigen::VectorXcd lhs_c = single_switch(c_mix, t1, g).amplitudes();
        Eigen::VectorXcd rhs_c = alpha * single_switch(c1, t1, g).amplitudes() + beta * single_switch(c2, t1, g).amplitudes();
        ASSERT_LT((lhs_c - rhs_c).norm(), 1e-10);
    }
}

TEST(SwitchInvariants, EntangledSwitchPreservesTrace) {
    Rng rng = make_stream(202);
    for (int k = 0; k < 100; ++k) {
        SwitchGates g1{GateSpec::make("a", random_unitary(rng)), GateSpec::make("b", random_unitary(rng))};
        SwitchGates g2{GateSpec::make("a", random_unitary(rng)), GateSpec::make("b", random_unitary(rng))};
        DensityOperator c = random_density(rng, {kC1, kC2}, 1 + k % 4);
        DensityOperator t = random_density(rng, {kT1, kT2}, 1 + k % 4);
        DensityOperator out = entangled_switch(c, t, g1, g2);
        ASSERT_NEAR(out.trace(), 1.0, 1e-10);
        ASSERT_GT(out.min_eigenvalue(), -1e-10);
    }
}

TEST(SwitchInvariants, ComputationalControlsEqualFixedOrderCircuit) {
    Rng rng = make_stream(203);
    for (int k = 0; k < 20; ++k) {
        SwitchGates g1{GateSpec::make("a1", random_unitary(rng)), GateSpec::make("b1", random_unitary(rng))};
        SwitchGates g2{GateSpec::make("a2", random_unitary(rng)), GateSpec::make("b2", random_unitary(rng))};
        DensityOperator targets = random_density(rng, {kT1, kT2});
        for (const char *bits : {"00", "01", "10", "11"}) {
            DensityOperator controls = DensityOperator::from_pure(StateVector::basis(bits, {kC1, kC2}));
            DensityOperator out = entangled_switch(controls, targets, g1, g2);
            auto order = [](const SwitchGates &g, char bit) {
                return bit == '0' ? compose(g.u_b, g.u_a) : compose(g.u_a, g.u_b);
            };
            DensityOperator circuit = apply_gate(apply_gate(targets, order(g1, bits[0]), kT1), order(g2, bits[1]), kT2);
            DensityOperator expect = reorder(tensor(circuit, controls), {kT1, kC1, kT2, kC2});
            ASSERT_LT((out.matrix() - expect.matrix()).cwiseAbs().maxCoeff(), 1e-10) << bits << " case " << k;
        }
    }
}

TEST(SwitchInvariants, CommutingGatesTransferNoEntanglement) {
    Rng rng = make_stream(204);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    const cplx i{0, 1};
    for (int k = 0; k < 100; ++k) {
        // U_A and U_B are rotations about a shared random axis.
        auto gates = [&] {
            Eigen::Matrix2cd n = bloch_operator(testing::random_unit(rng));
            auto rot = [&](double t) {
                return GateSpec::make("r", std::cos(t) * Eigen::Matrix2cd::Identity() + i * std::sin(t) * n);
            };
            return SwitchGates{rot(angle(rng)), rot(angle(rng))};
        };
        DensityOperator out = entangled_switch(switch_input_controls(), switch_input_targets(), gates(), gates());
        for (Sign a : {Sign::kPlus, Sign::kMinus}) {
            for (Sign b : {Sign::kPlus, Sign::kMinus}) {
                PostselectionResult r = postselect_controls(out, outcome(a, b));
                if (r.reachable() && r.probability > 1e-6) {
                    ASSERT_NEAR(concurrence_clipped(*r.state).value, 0.0, 1e-7) << "case " << k;
                }
            }
        }
    }
}

}  // namespace
}  // namespace switchsim
