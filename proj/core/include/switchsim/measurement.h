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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "switchsim/linalg.h"

namespace switchsim {

/// Outcome order used for every four-entry probability/count array:
/// (+,+), (+,−), (−,+), (−,−).
using Quad = std::array<double, 4>;

/// Projective ±1 measurement on each of two parties, given by Bloch axes.
struct MeasurementSetting {
    Eigen::Vector3d axis1;
    Eigen::Vector3d axis2;

    /// Throws std::invalid_argument unless both axes have unit norm.
    static MeasurementSetting make(const Eigen::Vector3d &axis1, const Eigen::Vector3d &axis2);
    /// From polarization labels, e.g. from_labels('H', 'D').
    static MeasurementSetting from_labels(char basis1, char basis2);
};

/// Bloch axis of the '+' outcome for a polarization label:
/// H = +z, V = −z, D = +x, A = −x, L = +y, R = −y ('+'/'-' alias D/A).
Eigen::Vector3d polarization_axis(char label);

/// Axis of the equatorial basis {(|0⟩ ± e^{−iφ}|1⟩)/√2} selected by a
/// Mach-Zehnder phase φ: (cos φ, −sin φ, 0).
Eigen::Vector3d equatorial_axis(double phase);

/// Coincidence counts for one setting plus per-detector-pair efficiencies.
/// Counts are stored as doubles so efficiency-corrected tables share the type.
struct CountsTable {
    std::string setting_id;
    Eigen::Vector3d axis1 = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d axis2 = Eigen::Vector3d::UnitZ();
    Quad counts{0, 0, 0, 0};
    Quad efficiencies{1, 1, 1, 1};

    double total() const {
        return counts[0] + counts[1] + counts[2] + counts[3];
    }
    void validate() const;
};

/// Born-rule probabilities of the four outcome pairs.
Quad born_probabilities(const DensityOperator &rho, const MeasurementSetting &setting);

/// Multinomial draw of N events followed by binomial thinning of each
/// outcome pair by its efficiency. Deterministic per seed.
CountsTable simulate_counts(const Quad &probs, std::uint64_t total_events, const Quad &efficiencies,
                            std::uint64_t rng_seed);

/// Convenience: Born probabilities of `rho` at `setting`, then simulate_counts.
/// `total_events == 0` stores the exact probabilities instead of samples.
CountsTable measure(const DensityOperator &rho, const MeasurementSetting &setting, std::string setting_id,
                    std::uint64_t total_events, const Quad &efficiencies, std::uint64_t rng_seed);

/// Divides each count by its detector-pair efficiency; the result carries
/// unit efficiencies. Throws std::invalid_argument on a zero efficiency.
CountsTable efficiency_correct(const CountsTable &counts);

/// (N₊₊ − N₊₋ − N₋₊ + N₋₋)/(N₊₊ + N₊₋ + N₋₊ + N₋₋). Throws on an empty table.
double correlation(const CountsTable &counts);

/// tr(ρ (a·σ) ⊗ (b·σ)).
double expected_correlation(const DensityOperator &rho, const MeasurementSetting &setting);

/// CSV columns: setting_id,axis1,axis2,npp,npm,nmp,nmm,eff_pp,eff_pm,eff_mp,eff_mm.
/// Axes are written as "x;y;z".
void write_counts_csv(std::ostream &out, const std::vector<CountsTable> &tables);
std::vector<CountsTable> read_counts_csv(std::istream &in);

}  // namespace switchsim
