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

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace switchsim {

using cplx = std::complex<double>;
using Labels = std::vector<std::string>;

struct GateSpec;

/// Pure state on a small register of tagged qubits.
///
/// Amplitude index order follows the tag order: the first tag is the most
/// significant bit, so `tensor(a, b)` is the Kronecker product a ⊗ b.
class StateVector {
   public:
    StateVector(Eigen::VectorXcd amplitudes, Labels labels);

    /// Single-qubit named state. Accepts 0/1, H/V, +/-, D/A, R/L and l/r,
    /// with H ≡ 0, D ≡ +, R ≡ r = (|0⟩ − i|1⟩)/√2 and L ≡ l = (|0⟩ + i|1⟩)/√2.
    static StateVector qubit(char name, std::string label);

    /// Computational basis state, e.g. basis("01", {"A", "B"}).
    static StateVector basis(std::string_view bits, Labels labels);

    const Eigen::VectorXcd &amplitudes() const {
        return amplitudes_;
    }
    const Labels &labels() const {
        return labels_;
    }
    size_t num_qubits() const {
        return labels_.size();
    }
    size_t dim() const {
        return static_cast<size_t>(amplitudes_.size());
    }
    double norm() const {
        return amplitudes_.norm();
    }
    bool is_normalized() const;
    StateVector normalized() const;
    StateVector relabeled(Labels labels) const;

   private:
    Eigen::VectorXcd amplitudes_;
    Labels labels_;
};

/// Mixed state (or unnormalised positive operator) on tagged qubits.
///
/// Construction only enforces dimensions, tag uniqueness and Hermiticity.
/// Unit trace and positivity are checked by `is_normalized()` and
/// `is_positive()` because post-selection produces unnormalised operators.
class DensityOperator {
   public:
    DensityOperator(Eigen::MatrixXcd matrix, Labels labels);

    static DensityOperator from_pure(const StateVector &psi);
    static DensityOperator maximally_mixed(Labels labels);

    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    const Labels &labels() const {
        return labels_;
    }
    size_t num_qubits() const {
        return labels_.size();
    }
    size_t dim() const {
        return static_cast<size_t>(matrix_.rows());
    }

    double trace() const;
    Eigen::VectorXd eigenvalues() const;
    double min_eigenvalue() const;
    bool is_normalized() const;
    bool is_positive() const;
    DensityOperator normalized() const;
    DensityOperator relabeled(Labels labels) const;

   private:
    Eigen::MatrixXcd matrix_;
    Labels labels_;
};

/// Index of `label` within `labels`; throws std::invalid_argument if absent.
size_t label_index(const Labels &labels, std::string_view label);

StateVector tensor(const StateVector &a, const StateVector &b);
DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);

/// Traces out every subsystem not named in `keep`. The surviving subsystems
/// keep their relative order from `rho`.
DensityOperator partial_trace(const DensityOperator &rho, const Labels &keep);

/// Permutes the register so that its tags appear in `order`.
StateVector reorder(const StateVector &psi, const Labels &order);
DensityOperator reorder(const DensityOperator &rho, const Labels &order);

/// Applies a single-qubit gate to the subsystem tagged `label`.
StateVector apply_gate(const StateVector &psi, const GateSpec &gate, std::string_view label);
DensityOperator apply_gate(const DensityOperator &rho, const GateSpec &gate, std::string_view label);

/// ⟨target|ρ|target⟩, with the target reordered to ρ's tags. Throws
/// std::invalid_argument if the tag sets differ.
double fidelity(const DensityOperator &rho, const StateVector &target);

/// Wootters concurrence of a two-qubit state. Throws std::domain_error when
/// the input has an eigenvalue below −tol::kSpectral.
double concurrence(const DensityOperator &rho);

struct ConcurrenceResult {
    double value;
    bool clipped;  // negative eigenvalues were removed before evaluation
};

/// Concurrence of the nearest positive operator: eigenvalues below zero are
/// clipped and the trace renormalised. `clipped` is set when any eigenvalue
/// was below −tol::kSpectral.
ConcurrenceResult concurrence_clipped(const DensityOperator &rho);

double trace_distance(const DensityOperator &a, const DensityOperator &b);

/// Clips negative eigenvalues and renormalises to unit trace.
DensityOperator clip_to_physical(const DensityOperator &rho);

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
/// σ_x, σ_y, σ_z for index 0, 1, 2.
Eigen::Matrix2cd pauli(int axis);
/// a·σ for a real 3-vector.
Eigen::Matrix2cd bloch_operator(const Eigen::Vector3d &axis);
/// (𝟙 ± a·σ)/2 for a unit axis; `plus` selects the sign.
Eigen::Matrix2cd bloch_projector(const Eigen::Vector3d &axis, bool plus);
/// Bloch vector of a normalised single-qubit state.
Eigen::Vector3d bloch_vector(const StateVector &psi);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

}  // namespace switchsim
