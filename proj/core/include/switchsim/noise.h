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

#include "switchsim/linalg.h"
#include "switchsim/rng.h"

namespace switchsim {

/// Path-entangled source. `visibility` is the two-photon visibility in the
/// anti-correlated basis; `phase_offset` is the relative phase on |11⟩.
struct SourceConfig {
    double visibility = 1.0;
    double phase_offset = 0.0;

    void validate() const;
};

/// Order coherence of the two SWITCH interferometers.
struct InterferometerConfig {
    double vis1 = 1.0;
    double vis2 = 1.0;
    double phase_jitter_deg = 0.0;

    void validate() const;
};

/// v·|Φ⁻_φ⟩⟨Φ⁻_φ| + (1 − v)·½(|00⟩⟨00| + |11⟩⟨11|) with
/// |Φ⁻_φ⟩ = (|00⟩ − e^{iφ}|11⟩)/√2. The decohered part is the classical
/// mixture of |00⟩ and |11⟩, not white noise.
DensityOperator make_source_state(const SourceConfig &cfg, const Labels &labels = {"C1", "C2"});

/// Dephases each control in its computational basis: coherences between
/// |0⟩ and |1⟩ of C1 (C2) are scaled by vis1 (vis2).
DensityOperator dephase_orders(const DensityOperator &state, const InterferometerConfig &cfg);

/// One N(0, σ) phase sample in radians for σ given in degrees. σ = 0 returns
/// exactly 0. Deterministic in `rng_seed`.
double sample_phase_jitter(std::uint64_t rng_seed, double sigma_deg);

/// Same distribution drawn from an existing stream.
double sample_phase_jitter(Rng &rng, double sigma_deg);

}  // namespace switchsim
