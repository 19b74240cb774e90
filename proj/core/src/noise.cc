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

#include "switchsim/noise.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "switchsim/switch_model.h"

namespace switchsim {

namespace {

void check_unit_interval(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace

void SourceConfig::validate() const {
    check_unit_interval(visibility, "source visibility");
    if (!std::isfinite(phase_offset)) {
        throw std::invalid_argument("source phase offset must be finite");
    }
}

void InterferometerConfig::validate() const {
    check_unit_interval(vis1, "interferometer visibility vis1");
    check_unit_interval(vis2, "interferometer visibility vis2");
    if (!(phase_jitter_deg >= 0.0) || !std::isfinite(phase_jitter_deg)) {
        throw std::invalid_argument("interferometer phase jitter must be a finite value >= 0");
    }
}

DensityOperator make_source_state(const SourceConfig &cfg, const Labels &labels) {
    cfg.validate();
    const cplx i{0, 1};
    const double v = cfg.visibility;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    cplx coherence = -0.5 * v * std::exp(-i * cfg.phase_offset);
    rho(0, 3) = coherence;
    rho(3, 0) = std::conj(coherence);
    return DensityOperator(rho, labels);
}

DensityOperator dephase_orders(const DensityOperator &state, const InterferometerConfig &cfg) {
    cfg.validate();
    const size_t n = state.num_qubits();
    const size_t p1 = label_index(state.labels(), kC1);
    const size_t p2 = label_index(state.labels(), kC2);
    auto bit = [n](Eigen::Index idx, size_t pos) { return (static_cast<size_t>(idx) >> (n - 1 - pos)) & 1U; };
    Eigen::MatrixXcd out = state.matrix();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            double f = 1.0;
            if (bit(r, p1) != bit(c, p1)) {
                f *= cfg.vis1;
            }
            if (bit(r, p2) != bit(c, p2)) {
                f *= cfg.vis2;
            }
            out(r, c) *= f;
        }
    }
    return DensityOperator(out, state.labels());
}

double sample_phase_jitter(Rng &rng, double sigma_deg) {
    if (!(sigma_deg >= 0.0)) {
        throw std::invalid_argument("phase jitter sigma must be >= 0");
    }
    if (sigma_deg == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> dist(0.0, sigma_deg * std::numbers::pi / 180.0);
    return dist(rng);
}

double sample_phase_jitter(std::uint64_t rng_seed, double sigma_deg) {
    Rng rng = make_stream(rng_seed);
    return sample_phase_jitter(rng, sigma_deg);
}

}  // namespace switchsim
