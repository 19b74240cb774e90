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

#include "switchsim/pipeline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "switchsim/rng.h"
#include "switchsim/tolerances.h"
#include "switchsim/tomography.h"

namespace switchsim {

namespace {

// Stream indices per measurement stage within one run.
constexpr std::uint64_t kTargetPhase = 0;
constexpr std::uint64_t kTargetCounts = 100;
constexpr std::uint64_t kControlPhase = 200;
constexpr std::uint64_t kControlCounts = 300;
constexpr std::uint64_t kTomoPhase = 400;
constexpr std::uint64_t kTomoCounts = 500;
constexpr std::uint64_t kInputTomo = 600;

const char *const kChshIds[4] = {"ab", "a'b", "ab'", "a'b'"};

Eigen::Vector3d rotate_z(const Eigen::Vector3d &axis, double angle) {
    return Eigen::AngleAxisd(-angle, Eigen::Vector3d::UnitZ()) * axis;
}

Statistic summarize(const std::vector<double> &xs) {
    Statistic s;
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return s;
}

}  // namespace

void ExperimentConfig::validate() const {
    source.validate();
    ifo.validate();
    if (!(source_jitter_deg >= 0) || !std::isfinite(source_jitter_deg)) {
        throw std::invalid_argument("source phase jitter must be a finite value >= 0");
    }
    if (!(target_input_fidelity >= 0 && target_input_fidelity <= 1)) {
        throw std::invalid_argument("target input fidelity must lie in [0, 1]");
    }
    CountsTable probe;
    probe.efficiencies = efficiencies;
    probe.validate();
}

DensityOperator target_input_state(double fidelity) {
    if (!(fidelity >= 0 && fidelity <= 1)) {
        throw std::invalid_argument("target input fidelity must lie in [0, 1]");
    }
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = fidelity;
    for (int k = 1; k < 4; ++k) {
        m(k, k) = (1.0 - fidelity) / 3.0;
    }
    return DensityOperator(m, {kT1, kT2});
}

PhaseSample draw_phases(const ExperimentConfig &cfg, Rng &rng) {
    PhaseSample p;
    p.source = sample_phase_jitter(rng, cfg.source_jitter_deg);
    p.ifo1 = sample_phase_jitter(rng, cfg.ifo.phase_jitter_deg);
    p.ifo2 = sample_phase_jitter(rng, cfg.ifo.phase_jitter_deg);
    return p;
}

DensityOperator control_state(const ExperimentConfig &cfg, const PhaseSample &phases) {
    SourceConfig src = cfg.source;
    src.phase_offset += phases.source;
    return make_source_state(src);
}

DensityOperator switch_output(const ExperimentConfig &cfg, const PhaseSample &phases) {
    cfg.validate();
    DensityOperator out = entangled_switch(control_state(cfg, phases), target_input_state(cfg.target_input_fidelity),
                                           cfg.gates1, cfg.gates2);
    return dephase_orders(out, cfg.ifo);
}

DensityOperator postselected_target(const ExperimentConfig &cfg, const PhaseSample &phases) {
    auto r = postselect_controls(switch_output(cfg, phases),
                                 {cfg.postselect1, cfg.postselect2, phases.ifo1, phases.ifo2});
    if (!r.reachable()) {
        throw std::domain_error("the configured post-selection outcome never occurs for this configuration");
    }
    return *r.state;
}

ChshSettings target_analyzer_settings() {
    DensityOperator ideal = DensityOperator::from_pure(ideal_target_state());
    return chsh_max_in_planes(correlation_tensor(ideal), BlochPlane::kXZ, BlochPlane::kXZ).settings;
}

ChshSettings control_analyzer_settings() {
    return chsh_max_in_planes(correlation_tensor(switch_input_controls()), BlochPlane::kXY, BlochPlane::kXY)
        .settings;
}

ExactMetrics exact_metrics(const ExperimentConfig &cfg) {
    cfg.validate();
    ExactMetrics m;
    DensityOperator in = target_input_state(cfg.target_input_fidelity);
    m.input_fidelity = fidelity(in, StateVector::basis("00", {kT1, kT2}));
    m.input_concurrence = concurrence(in);
    DensityOperator out = switch_output(cfg);
    const Sign signs[2] = {Sign::kPlus, Sign::kMinus};
    for (int k = 0; k < 4; ++k) {
        m.postselection_probability[k] = postselect_controls(out, {signs[k >> 1], signs[k & 1], 0, 0}).probability;
    }
    DensityOperator target = postselected_target(cfg);
    m.output_fidelity = fidelity(target, ideal_target_state());
    m.output_concurrence = concurrence_clipped(target).value;
    CorrelationTensor t = correlation_tensor(target);
    m.s_target = chsh_value(t, target_analyzer_settings());
    m.s_target_max = chsh_max(t).value;
    m.s_control = chsh_value(control_state(cfg), control_analyzer_settings());
    return m;
}

RunMetrics simulate_run(const ExperimentConfig &cfg, std::uint64_t seed, bool tomography) {
    cfg.validate();
    const std::uint64_t n = cfg.counts_per_setting;
    RunMetrics out;

    auto tsettings = target_analyzer_settings().measurement_settings();
    std::array<CountsTable, 4> ttables;
    for (std::uint64_t k = 0; k < 4; ++k) {
        Rng rng = make_stream(seed, kTargetPhase + k);
        DensityOperator rho = postselected_target(cfg, draw_phases(cfg, rng));
        ttables[k] = measure(rho, tsettings[k], kChshIds[k], n, cfg.efficiencies, derive_seed(seed, kTargetCounts + k));
    }
    ChshEstimate st = chsh_from_counts(ttables);
    out.s_target = st.value;
    out.s_target_sigma = st.sigma;

    auto csettings = control_analyzer_settings().measurement_settings();
    std::array<CountsTable, 4> ctables;
    for (std::uint64_t k = 0; k < 4; ++k) {
        Rng rng = make_stream(seed, kControlPhase + k);
        PhaseSample ph = draw_phases(cfg, rng);
        MeasurementSetting s{rotate_z(csettings[k].axis1, ph.ifo1), rotate_z(csettings[k].axis2, ph.ifo2)};
        ctables[k] = measure(control_state(cfg, ph), s, kChshIds[k], n, cfg.efficiencies,
                             derive_seed(seed, kControlCounts + k));
    }
    ChshEstimate sc = chsh_from_counts(ctables);
    out.s_control = sc.value;
    out.s_control_sigma = sc.sigma;

    if (tomography) {
        DensityOperator est = reconstruct_mle(output_tomography_record(cfg, seed)).rho;
        out.fidelity = fidelity(est, ideal_target_state());
        out.concurrence = concurrence_clipped(est).value;
    }
    return out;
}

TomographyRecord output_tomography_record(const ExperimentConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    auto settings = pauli_basis_settings();
    TomographyRecord rec;
    for (std::uint64_t k = 0; k < settings.size(); ++k) {
        Rng rng = make_stream(seed, kTomoPhase + k);
        DensityOperator rho = postselected_target(cfg, draw_phases(cfg, rng));
        rec.tables.push_back(measure(rho, settings[k].setting, settings[k].id, cfg.counts_per_setting,
                                     cfg.efficiencies, derive_seed(seed, kTomoCounts + k)));
    }
    return rec;
}

TomographyRecord input_tomography_record(const ExperimentConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    return simulate_tomography(target_input_state(cfg.target_input_fidelity), pauli_basis_settings(),
                               cfg.counts_per_setting, cfg.efficiencies, derive_seed(seed, kInputTomo));
}

MonteCarloSummary monte_carlo_errors(const ExperimentConfig &cfg, int runs, std::uint64_t seed, bool tomography,
                                     unsigned threads) {
    if (runs < 2) {
        throw std::invalid_argument("monte_carlo_errors: at least two runs are required");
    }
    cfg.validate();
    std::vector<RunMetrics> results(static_cast<size_t>(runs));
    parallel_for(
        results.size(),
        [&](size_t r) { results[r] = simulate_run(cfg, derive_seed(seed, r), tomography); }, threads);
    std::vector<double> st, sc, f, c;
    for (const auto &r : results) {
        st.push_back(r.s_target);
        sc.push_back(r.s_control);
        f.push_back(r.fidelity);
        c.push_back(r.concurrence);
    }
    MonteCarloSummary out;
    out.runs = runs;
    out.tomography = tomography;
    out.s_target = summarize(st);
    out.s_control = summarize(sc);
    if (tomography) {
        out.fidelity = summarize(f);
        out.concurrence = summarize(c);
    }
    return out;
}

double expected_control_chsh(const ExperimentConfig &cfg, int samples, std::uint64_t seed) {
    if (samples < 1) {
        throw std::invalid_argument("expected_control_chsh: samples must be positive");
    }
    ExperimentConfig exact = cfg;
    exact.counts_per_setting = 0;
    double sum = 0;
    for (int s = 0; s < samples; ++s) {
        sum += simulate_run(exact, derive_seed(seed, static_cast<std::uint64_t>(s)), false).s_control;
    }
    return sum / samples;
}

double calibrate_source_visibility(const ExperimentConfig &cfg, double target_s, int samples, std::uint64_t seed) {
    auto at = [&](double v) {
        ExperimentConfig c = cfg;
        c.source.visibility = v;
        return expected_control_chsh(c, samples, seed);
    };
    if (!(target_s >= at(0.0) && target_s <= at(1.0))) {
        throw std::domain_error("calibrate_source_visibility: target CHSH value is out of reach");
    }
    double lo = 0, hi = 1;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (at(mid) < target_s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SweepAxis parse_sweep_axis(const std::string &name) {
    if (name == "source_visibility") {
        return SweepAxis::kSourceVisibility;
    }
    if (name == "ifo1") {
        return SweepAxis::kIfo1;
    }
    if (name == "ifo_both") {
        return SweepAxis::kIfoBoth;
    }
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected source_visibility, ifo1 or ifo_both)");
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kSourceVisibility:
            return "source_visibility";
        case SweepAxis::kIfo1:
            return "ifo1";
        case SweepAxis::kIfoBoth:
            return "ifo_both";
    }
    return "";
}

std::vector<SweepRow> sweep(const ExperimentConfig &cfg, SweepAxis axis, const std::vector<double> &grid,
                            std::uint64_t seed) {
    if (grid.empty()) {
        throw std::invalid_argument("sweep: empty grid");
    }
    for (double x : grid) {
        if (!(x >= 0 && x <= 1)) {
            throw std::invalid_argument("sweep: grid values must lie in [0, 1]");
        }
    }
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), [&](size_t k) {
        ExperimentConfig c = cfg;
        switch (axis) {
            case SweepAxis::kSourceVisibility:
                c.source.visibility = grid[k];
                break;
            case SweepAxis::kIfo1:
                c.ifo.vis1 = grid[k];
                break;
            case SweepAxis::kIfoBoth:
                c.ifo.vis1 = grid[k];
                c.ifo.vis2 = grid[k];
                break;
        }
        RunMetrics r = simulate_run(c, seed, false);
        rows[k] = {grid[k], r.s_target, r.s_target_sigma, r.s_control, r.s_control_sigma};
    });
    return rows;
}

double linear_fit_r2(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear_fit_r2: need at least two matching points");
    }
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0) {
        throw std::invalid_argument("linear_fit_r2: x values are all equal");
    }
    if (syy == 0) {
        return 1.0;
    }
    return sxy * sxy / (sxx * syy);
}

DensityOperator definite_order_state(const SwitchGates &gates, bool alice_first) {
    StateVector out = single_switch(StateVector::qubit(alice_first ? '0' : '1', "C"), StateVector::qubit('H', "T"),
                                    gates);
    return DensityOperator::from_pure(reorder(out, {"C", "T"}));
}

}  // namespace switchsim
