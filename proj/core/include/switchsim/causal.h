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

#include <array>
#include <iosfwd>
#include <vector>

#include "switchsim/gates.h"
#include "switchsim/linalg.h"
#include "switchsim/rng.h"

namespace switchsim {

/// A quantum instrument per setting: one branch (deterministic, outcome 0)
/// or two branches (outcomes 0 and 1) of 2×2 Kraus operators.
struct Instrument {
    std::vector<std::vector<Eigen::Matrix2cd>> settings;

    /// Throws std::invalid_argument unless every setting has one or two
    /// branches with Σ K†K = 𝟙 within tol::kAlgebraic.
    static Instrument make(std::vector<std::vector<Eigen::Matrix2cd>> settings);
    size_t num_settings() const {
        return settings.size();
    }
};

Instrument unitary_instrument(const std::vector<GateSpec> &gates);

/// Kraus operators |φₐ⟩⟨mₐ| where mₐ are the ± eigenstates of the measured
/// axis and φₐ the pure states with Bloch vectors `prepare[a]`.
std::vector<Eigen::Matrix2cd> measure_reprepare(const Eigen::Vector3d &measure,
                                                const std::array<Eigen::Vector3d, 2> &prepare);

/// One setting: measure along `measure`, reprepare the ± eigenstate of the
/// orthogonal axis `prepare` according to the outcome.
Instrument basis_instrument(const Eigen::Vector3d &measure, const Eigen::Vector3d &prepare);

/// Settings with random measurement axes and random reprepared states.
Instrument random_measure_reprepare(Rng &rng, size_t num_settings);

/// p(a,b,c|x,y,z) with binary outcomes.
class BehaviorTable {
   public:
    BehaviorTable(size_t nx, size_t ny, size_t nz);

    size_t nx() const {
        return nx_;
    }
    size_t ny() const {
        return ny_;
    }
    size_t nz() const {
        return nz_;
    }
    double &at(size_t x, size_t y, size_t z, int a, int b, int c);
    double at(size_t x, size_t y, size_t z, int a, int b, int c) const;
    const std::vector<double> &values() const {
        return p_;
    }

    /// Largest |Σ p − 1| over (x,y,z) slices.
    double normalization_error() const;
    /// Largest |p(a,b|x,y,z) − p(a,b|x,y,z′)|.
    double signaling_error() const;
    /// Throws std::invalid_argument if either error exceeds `tolerance`.
    void validate(double tolerance = 1e-9) const;

   private:
    size_t index(size_t x, size_t y, size_t z, int a, int b, int c) const;
    size_t nx_, ny_, nz_;
    std::vector<double> p_;
};

void write_behavior_csv(std::ostream &out, const BehaviorTable &table);
BehaviorTable read_behavior_csv(std::istream &in);

/// Bloch axes of Charlie's control measurements: the ± basis and the
/// equatorial basis rotated by π/4.
std::vector<Eigen::Vector3d> default_charlie_settings();

/// Charlie measures the control of a single SWITCH after Alice's and Bob's
/// instruments act in the order selected by it (|0⟩: Alice first).
BehaviorTable switch_behavior(const Instrument &alice, const Instrument &bob, const StateVector &control_in,
                              const StateVector &target_in, const std::vector<Eigen::Vector3d> &charlie_settings);

enum class CausalOrder { kAliceFirst, kBobFirst };

/// Fixed-order behavior p^{order}(a,b|x,y) · p(c|a,b,x,y,z), where the first
/// factor is the sequential composition of the instruments on the target
/// and the second is Charlie's response in the SWITCH behavior for the same
/// inputs (uniform when the SWITCH never produces (a,b)). Charlie acts last
/// in both orders.
BehaviorTable ordered_behavior(CausalOrder order, const Instrument &alice, const Instrument &bob,
                               const StateVector &control_in, const StateVector &target_in,
                               const std::vector<Eigen::Vector3d> &charlie_settings);

struct CausalDecomposition {
    double zeta = 0;
    double residual = 0;  // max-entry |p − ζ p_A − (1−ζ) p_B|
    bool identifiable = true;
    bool feasible = false;
};

/// Least-squares ζ for p ≈ ζ p_A + (1 − ζ) p_B. Feasible iff the residual is
/// below `tolerance` and ζ ∈ [0, 1]. When p_A and p_B coincide every ζ fits;
/// the midpoint ½ is reported with identifiable = false.
CausalDecomposition find_causal_decomposition(const BehaviorTable &p, const BehaviorTable &p_a,
                                              const BehaviorTable &p_b, double tolerance = 1e-9);

}  // namespace switchsim
