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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "switchsim/linalg.h"
#include "switchsim/measurement.h"

namespace switchsim {

struct LabeledSetting {
    std::string id;
    MeasurementSetting setting;
};

/// The 36 ordered pairs of {H, V, D, A, R, L}; ids are "HH", "HV", ...
/// Each table records the four projectors |s₁⟩⟨s₁|⊗|s₂⟩⟨s₂| and their
/// orthogonal complements.
std::vector<LabeledSetting> pauli_basis_settings();

struct TomographyRecord {
    std::vector<CountsTable> tables;

    /// Throws std::invalid_argument on an empty record or invalid table.
    void validate() const;
};

/// Simulates one CountsTable per setting, each from its own derived stream.
/// total_events = 0 stores exact probabilities.
TomographyRecord simulate_tomography(const DensityOperator &rho, const std::vector<LabeledSetting> &settings,
                                     std::uint64_t total_events, const Quad &efficiencies, std::uint64_t rng_seed);

struct LinearEstimate {
    DensityOperator rho;
    double min_eigenvalue;
    bool negative;  // min_eigenvalue < −tol::kSpectral
};

/// Least-squares inversion for the 16 Pauli coefficients, Hermitised and
/// trace-normalised. Throws std::invalid_argument if the settings do not
/// span the two-qubit operator space.
LinearEstimate reconstruct_linear(const TomographyRecord &rec, const Labels &labels = {"T1", "T2"});

/// Nearest unit-trace PSD operator in Frobenius norm (eigenvalue
/// projection onto the simplex).
DensityOperator project_to_physical(const DensityOperator &rho);

struct MleOptions {
    int max_iterations = 5000;
    /// Stop when the per-event log-likelihood gains less than this.
    double tolerance = 1e-10;
    bool record_trace = false;
};

struct MleEstimate {
    DensityOperator rho;
    double log_likelihood;
    int iterations;
    bool converged;
    /// Per-event log-likelihood after each accepted step, starting with the
    /// initial point (only filled when MleOptions::record_trace is set).
    std::vector<double> likelihood_trace;
};

/// Maximum-likelihood estimate via the diluted RρR iteration. Two ascents
/// start from the projected linear estimate, mixed with 1% and with 1e-9
/// white noise; the one with the higher likelihood is returned.
MleEstimate reconstruct_mle(const TomographyRecord &rec, const MleOptions &options = {},
                            const Labels &labels = {"T1", "T2"});

/// Σₖ nₖ log pₖ / Σₖ nₖ over efficiency-corrected counts.
double log_likelihood(const TomographyRecord &rec, const DensityOperator &rho);

/// Writes `json_path` (settings list) and a sibling counts CSV with the same
/// stem.
void write_tomography_record(const std::filesystem::path &json_path, const TomographyRecord &rec);
TomographyRecord read_tomography_record(const std::filesystem::path &json_path);

}  // namespace switchsim
