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
#include <span>

#include "switchsim/linalg.h"
#include "switchsim/measurement.h"

namespace switchsim {

/// Bloch axes a, a′ (party 1) and b, b′ (party 2) of a CHSH test.
struct ChshSettings {
    Eigen::Vector3d a;
    Eigen::Vector3d a_prime;
    Eigen::Vector3d b;
    Eigen::Vector3d b_prime;

    static ChshSettings make(const Eigen::Vector3d &a, const Eigen::Vector3d &a_prime, const Eigen::Vector3d &b,
                             const Eigen::Vector3d &b_prime);

    /// Settings in the order (a,b), (a′,b), (a,b′), (a′,b′) used by
    /// chsh_from_counts.
    std::array<MeasurementSetting, 4> measurement_settings() const;
};

/// T[i][j] = tr(ρ σᵢ ⊗ σⱼ); rows belong to party 1.
struct CorrelationTensor {
    Eigen::Matrix3d t = Eigen::Matrix3d::Zero();

    /// Throws std::invalid_argument if an entry leaves [−1, 1] by more than
    /// tol::kSpectral.
    static CorrelationTensor make(const Eigen::Matrix3d &t);
};

CorrelationTensor correlation_tensor(const DensityOperator &rho);

/// |a·Tb + a′·Tb + a·Tb′ − a′·Tb′|.
double chsh_value(const CorrelationTensor &tensor, const ChshSettings &settings);
double chsh_value(const DensityOperator &rho, const ChshSettings &settings);

struct ChshMax {
    double value = 0;
    ChshSettings settings;
    Eigen::Vector3d singular_values = Eigen::Vector3d::Zero();  // descending
};

/// Maximal CHSH value 2√(t₁² + t₂²) from the two largest singular values of
/// T, with maximising settings built from the matching singular vectors.
/// Degenerate singular values are ordered by their sign-normalised left
/// singular vectors, lexicographically descending.
ChshMax chsh_max(const CorrelationTensor &tensor);

/// Coordinate plane of the Bloch sphere.
enum class BlochPlane { kXY, kXZ, kYZ };

/// Like chsh_max but with each party's axes restricted to a plane, e.g. the
/// equator reachable by an interferometer phase or the linear-polarization
/// (x–z) plane reachable with a half-wave plate.
ChshMax chsh_max_in_planes(const CorrelationTensor &tensor, BlochPlane plane1, BlochPlane plane2);

struct ChshEstimate {
    double value = 0;
    double sigma = 0;
    std::array<double, 4> correlations{};
};

/// CHSH value from four tables in the order (a,b), (a′,b), (a,b′), (a′,b′).
/// Correlations are computed after efficiency correction; each one carries
/// the binomial variance (1 − C²)/N with N the raw coincidence total.
/// Tables with `total() == 1` and unit efficiencies are treated as exact
/// probabilities (σ = 0).
ChshEstimate chsh_from_counts(std::span<const CountsTable, 4> tables);

}  // namespace switchsim
