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
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracle_values.h"
#include "switchsim/causal.h"
#include "test_util.h"

namespace switchsim {
namespace {

const Eigen::Vector3d kX = Eigen::Vector3d::UnitX();
const Eigen::Vector3d kZ = Eigen::Vector3d::UnitZ();

StateVector control(double alpha2, double phase) {
    const cplx i{0, 1};
    return StateVector(Eigen::Vector2cd(std::sqrt(alpha2), std::sqrt(1 - alpha2) * std::exp(i * phase)), {"C"});
}

StateVector target_h() {
    return StateVector::qubit('H', "T");
}

struct Triple {
    BehaviorTable p, pa, pb;
};

Triple behaviors(const Instrument &a, const Instrument &b, const StateVector &c) {
    auto z = default_charlie_settings();
    return {switch_behavior(a, b, c, target_h(), z), ordered_behavior(CausalOrder::kAliceFirst, a, b, c, target_h(), z),
            ordered_behavior(CausalOrder::kBobFirst, a, b, c, target_h(), z)};
}

double max_diff(const BehaviorTable &a, const BehaviorTable &b) {
    double d = 0;
    for (size_t k = 0; k < a.values().size(); ++k) {
        d = std::max(d, std::abs(a.values()[k] - b.values()[k]));
    }
    return d;
}

TEST(Instrument, Validation) {
    EXPECT_THROW(Instrument::make({}), std::invalid_argument);
    EXPECT_THROW(Instrument::make({{Eigen::Matrix2cd::Identity() * 0.5}}), std::invalid_argument);
    Eigen::Matrix2cd half = Eigen::Matrix2cd::Identity() / std::sqrt(2.0);
    EXPECT_NO_THROW(Instrument::make({{half, half}}));
    EXPECT_THROW(Instrument::make({{half, half, Eigen::Matrix2cd::Zero()}}), std::invalid_argument);
    Instrument z = basis_instrument(kZ, kX);
    ASSERT_EQ(z.num_settings(), 1u);
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto &k : z.settings[0]) {
        sum += k.adjoint() * k;
    }
    EXPECT_LT((sum - Eigen::Matrix2cd::Identity()).norm(), 1e-12);
    // Outcome 0 of the z instrument leaves the target in |+⟩.
    Eigen::Vector2cd out = z.settings[0][0] * Eigen::Vector2cd(1, 0);
    EXPECT_NEAR(std::abs(out(0) - out(1)), 0.0, 1e-12);
}

TEST(SwitchBehavior, UnitaryPartiesMatchSwitchModel) {
    Instrument alice = unitary_instrument({gate_preset("sqrt_iX")});
    Instrument bob = unitary_instrument({gate_preset("hadamard")});
    BehaviorTable p = switch_behavior(alice, bob, StateVector::qubit('+', "C"), StateVector::qubit('0', "T"),
                                      default_charlie_settings());
    EXPECT_NEAR(p.at(0, 0, 0, 0, 0, 0), oracle::kUnitarySwitchPcPlusX, 1e-12);
    EXPECT_NEAR(p.at(0, 0, 1, 0, 0, 0), oracle::kUnitarySwitchPcPlusPi4, 1e-12);
    p.validate();
    // Every candidate decomposition fits when the two orders look alike.
    BehaviorTable pa = ordered_behavior(CausalOrder::kAliceFirst, alice, bob, StateVector::qubit('+', "C"),
                                        StateVector::qubit('0', "T"), default_charlie_settings());
    BehaviorTable pb = ordered_behavior(CausalOrder::kBobFirst, alice, bob, StateVector::qubit('+', "C"),
                                        StateVector::qubit('0', "T"), default_charlie_settings());
    CausalDecomposition d = find_causal_decomposition(p, pa, pb);
    EXPECT_FALSE(d.identifiable);
    EXPECT_TRUE(d.feasible);
    EXPECT_EQ(d.zeta, 0.5);
}

TEST(SwitchBehavior, DefiniteControlIsTheOrderedCircuit) {
    Instrument z = basis_instrument(kZ, kX);
    Instrument x = basis_instrument(kX, kZ);
    Triple t0 = behaviors(z, x, StateVector::qubit('0', "C"));
    EXPECT_LT(max_diff(t0.p, t0.pa), 1e-15);
    CausalDecomposition d0 = find_causal_decomposition(t0.p, t0.pa, t0.pb);
    EXPECT_NEAR(d0.zeta, 1.0, 1e-12);
    Triple t1 = behaviors(z, x, StateVector::qubit('1', "C"));
    EXPECT_LT(max_diff(t1.p, t1.pb), 1e-15);
    EXPECT_NEAR(find_causal_decomposition(t1.p, t1.pa, t1.pb).zeta, 0.0, 1e-12);
}

TEST(Decomposition, PlusControlWithZBasisInstruments) {
    Instrument z = basis_instrument(kZ, kX);
    Triple t = behaviors(z, z, StateVector::qubit('+', "C"));
    CausalDecomposition d = find_causal_decomposition(t.p, t.pa, t.pb);
    EXPECT_TRUE(d.identifiable);
    EXPECT_TRUE(d.feasible);
    EXPECT_NEAR(d.zeta, 0.5, 1e-12);
    EXPECT_LT(d.residual, 1e-10);
}

TEST(Decomposition, CandidateAsTarget) {
    Instrument z = basis_instrument(kZ, kX);
    Triple t = behaviors(z, z, StateVector::qubit('+', "C"));
    CausalDecomposition d = find_causal_decomposition(t.pa, t.pa, t.pb);
    EXPECT_NEAR(d.zeta, 1.0, 1e-15);
    EXPECT_EQ(d.residual, 0.0);
}

TEST(Decomposition, InfeasibleWhenOutsideTheSegment) {
    Instrument z = basis_instrument(kZ, kX);
    Triple t = behaviors(z, z, StateVector::qubit('+', "C"));
    // 2·pA − pB lies on the line through both candidates, beyond the pA end.
    BehaviorTable beyond(1, 1, 2);
    for (size_t zz = 0; zz < 2; ++zz)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    beyond.at(0, 0, zz, a, b, c) = 2 * t.pa.at(0, 0, zz, a, b, c) - t.pb.at(0, 0, zz, a, b, c);
    CausalDecomposition d = find_causal_decomposition(beyond, t.pa, t.pb);
    EXPECT_NEAR(d.zeta, 2.0, 1e-9);
    EXPECT_FALSE(d.feasible);
    EXPECT_THROW(find_causal_decomposition(BehaviorTable(2, 1, 2), t.pa, t.pb), std::invalid_argument);
}

TEST(BehaviorTable, ValidationAndCsv) {
    Instrument z = basis_instrument(kZ, kX);
    Triple t = behaviors(z, z, StateVector::qubit('+', "C"));
    std::stringstream buf;
    write_behavior_csv(buf, t.p);
    BehaviorTable back = read_behavior_csv(buf);
    EXPECT_EQ(back.values(), t.p.values());
    BehaviorTable bad(1, 1, 1);
    bad.at(0, 0, 0, 0, 0, 0) = 0.5;
    EXPECT_GT(bad.normalization_error(), 0.4);
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    std::istringstream malformed("x,y,z,a,b,c,p\n0,0,0,0,0,2,1\n");
    EXPECT_THROW(read_behavior_csv(malformed), std::runtime_error);
    EXPECT_THROW(t.p.at(5, 0, 0, 0, 0, 0), std::out_of_range);
}

// Invariants.

std::vector<std::pair<std::string, Instrument>> families(Rng &rng) {
    return {{"z_basis", basis_instrument(kZ, kX)},
            {"x_basis", basis_instrument(kX, kZ)},
            {"random", random_measure_reprepare(rng, 2)}};
}

TEST(CausalInvariants, SwitchBehaviorAlwaysDecomposes) {
    std::uniform_real_distribution<double> u(0, 1);
    int checked = 0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng = make_stream(801, seed);
        for (auto &[name_a, alice] : families(rng)) {
            for (auto &[name_b, bob] : families(rng)) {
                for (int c = 0; c < 3; ++c) {
                    StateVector ctl = control(u(rng), 2 * std::numbers::pi * u(rng));
                    Triple t = behaviors(alice, bob, ctl);
                    CausalDecomposition d = find_causal_decomposition(t.p, t.pa, t.pb);
                    ASSERT_TRUE(d.feasible) << name_a << "/" << name_b << " seed " << seed;
                    ASSERT_LT(d.residual, 1e-9);
                    ++checked;
                }
            }
        }
    }
    EXPECT_EQ(checked, 20 * 9 * 3);
}

TEST(CausalInvariants, NoSignalingFromCharlie) {
    Rng rng = make_stream(802);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 100; ++k) {
        Instrument alice = random_measure_reprepare(rng, 2);
        Instrument bob = random_measure_reprepare(rng, 3);
        std::vector<Eigen::Vector3d> charlie{testing::random_unit(rng), testing::random_unit(rng), kX};
        StateVector tgt = testing::random_pure(rng, {"T"});
        BehaviorTable p = switch_behavior(alice, bob, control(u(rng), u(rng) * 6.28), tgt, charlie);
        ASSERT_LT(p.signaling_error(), 1e-9);
        ASSERT_LT(p.normalization_error(), 1e-9);
    }
}

TEST(CausalInvariants, ZetaIsControlWeight) {
    Rng rng = make_stream(803);
    for (int k = 0; k <= 10; ++k) {
        double alpha2 = k / 10.0;
        StateVector ctl = control(alpha2, 0.3 * k);
        // Pairs whose two orders give different statistics (identical
        // x-basis parties on |H⟩ do not, so they are left out here).
        std::vector<std::pair<Instrument, Instrument>> pairs{
            {basis_instrument(kZ, kX), basis_instrument(kZ, kX)},
            {basis_instrument(kZ, kX), basis_instrument(kX, kZ)},
            {random_measure_reprepare(rng, 2), random_measure_reprepare(rng, 2)}};
        for (size_t j = 0; j < pairs.size(); ++j) {
            const std::string name = "pair " + std::to_string(j);
            Triple t = behaviors(pairs[j].first, pairs[j].second, ctl);
            CausalDecomposition d = find_causal_decomposition(t.p, t.pa, t.pb);
            ASSERT_TRUE(d.identifiable) << name;
            ASSERT_NEAR(d.zeta, alpha2, 1e-9) << name << " alpha² = " << alpha2;
        }
    }
}

}  // namespace
}  // namespace switchsim
