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
#include <string>
#include <vector>

#include "switchsim/bell.h"
#include "switchsim/linalg.h"
#include "switchsim/measurement.h"
#include "switchsim/noise.h"
#include "switchsim/switch_model.h"
#include "switchsim/tomography.h"

namespace switchsim {

struct ExperimentConfig {
    SwitchGates gates1 = entangling_gates();
    SwitchGates gates2 = entangling_gates();
    SourceConfig source;
    InterferometerConfig ifo;
    double source_jitter_deg = 0.0;
    /// Fidelity of the diagonal product-state surrogate used for the target
    /// input; 1 gives |HH⟩.
    double target_input_fidelity = 1.0;
    Quad efficiencies{1, 1, 1, 1};
    /// Control outcomes the target is conditioned on.
    Sign postselect1 = Sign::kPlus;
    Sign postselect2 = Sign::kPlus;
    /// 0 uses exact probabilities.
    std::uint64_t counts_per_setting = 10000;

    void validate() const;
};

/// F|HH⟩⟨HH| + (1 − F)/3 (𝟙 − |HH⟩⟨HH|) on (T1, T2). Separable for every F.
DensityOperator target_input_state(double fidelity);

/// Phases drawn for one measurement setting.
struct PhaseSample {
    double source = 0;  // added to the source phase offset
    double ifo1 = 0;    // added to the post-selection / analyzer phase of control 1
    double ifo2 = 0;
};

PhaseSample draw_phases(const ExperimentConfig &cfg, Rng &rng);

/// Output of both SWITCHes on (T1, C1, T2, C2) with interferometer dephasing.
DensityOperator switch_output(const ExperimentConfig &cfg, const PhaseSample &phases = {});

/// Target state post-selected on the configured control outcomes. Throws
/// std::domain_error if that branch never occurs.
DensityOperator postselected_target(const ExperimentConfig &cfg, const PhaseSample &phases = {});

/// Control state before the SWITCHes.
DensityOperator control_state(const ExperimentConfig &cfg, const PhaseSample &phases = {});

/// Fixed analyzers: target in the linear-polarization (x–z) plane, controls
/// on the equator, each maximising CHSH for the ideal state in that plane.
ChshSettings target_analyzer_settings();
ChshSettings control_analyzer_settings();

struct ExactMetrics {
    double input_fidelity = 0;
    double input_concurrence = 0;
    double output_fidelity = 0;
    double output_concurrence = 0;
    double s_target = 0;
    double s_target_max = 0;  // Horodecki value over all settings
    double s_control = 0;
    /// Post-selection probabilities for (++, +−, −+, −−).
    std::array<double, 4> postselection_probability{};
};

/// Metrics of the noise-averaged states without phase jitter or sampling.
ExactMetrics exact_metrics(const ExperimentConfig &cfg);

struct RunMetrics {
    double s_target = 0;
    double s_target_sigma = 0;
    double s_control = 0;
    double s_control_sigma = 0;
    double fidelity = 0;     // reconstructed output vs ideal target
    double concurrence = 0;  // reconstructed output
};

/// One simulated experiment: fresh phases per setting, counts per
/// cfg.counts_per_setting, and (if requested) MLE tomography of the output.
RunMetrics simulate_run(const ExperimentConfig &cfg, std::uint64_t seed, bool tomography);

/// The 36-setting record of the post-selected output, with fresh phases per
/// setting, as used by simulate_run.
TomographyRecord output_tomography_record(const ExperimentConfig &cfg, std::uint64_t seed);

/// The 36-setting record of the target input state (no phase noise).
TomographyRecord input_tomography_record(const ExperimentConfig &cfg, std::uint64_t seed);

struct Statistic {
    double mean = 0;
    double std = 0;  // sample standard deviation
};

struct MonteCarloSummary {
    int runs = 0;
    Statistic s_target;
    Statistic s_control;
    Statistic fidelity;
    Statistic concurrence;
    bool tomography = false;
};

/// Repeats simulate_run over derived seeds in parallel. Requires runs ≥ 2.
MonteCarloSummary monte_carlo_errors(const ExperimentConfig &cfg, int runs, std::uint64_t seed, bool tomography,
                                     unsigned threads = 0);

/// Control CHSH with exact probabilities averaged over `samples` phase draws.
double expected_control_chsh(const ExperimentConfig &cfg, int samples, std::uint64_t seed);

/// Source visibility at which expected_control_chsh equals `target_s`, by
/// bisection. Throws std::domain_error if the target is out of reach.
double calibrate_source_visibility(const ExperimentConfig &cfg, double target_s, int samples, std::uint64_t seed);

enum class SweepAxis { kSourceVisibility, kIfo1, kIfoBoth };

SweepAxis parse_sweep_axis(const std::string &name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepRow {
    double visibility = 0;
    double s_target = 0;
    double s_target_err = 0;
    double s_control = 0;
    double s_control_err = 0;
};

/// S at each grid value. Every grid point reuses the same phase draws and
/// sampling seeds.
std::vector<SweepRow> sweep(const ExperimentConfig &cfg, SweepAxis axis, const std::vector<double> &grid,
                            std::uint64_t seed);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double> &x, const std::vector<double> &y);

/// Single SWITCH with a definite order (control |0⟩: A first), target |H⟩,
/// returned on (control, target).
DensityOperator definite_order_state(const SwitchGates &gates, bool alice_first);

}  // namespace switchsim
