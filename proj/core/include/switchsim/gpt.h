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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "switchsim/linalg.h"
#include "switchsim/measurement.h"

namespace switchsim {

/// A locally tomographic binary-system pair: local vectors and correlation
/// tensor. A GPT state may also carry a global parameter, but it never
/// enters a probability for a pair of local measurements, so it is not
/// represented here.
struct GptState {
    Eigen::Vector3d omega1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d omega2 = Eigen::Vector3d::Zero();
    Eigen::Matrix3d t = Eigen::Matrix3d::Zero();

    /// Throws std::invalid_argument if |ωᵢ| > 1 + 1e-9 or |Tᵢⱼ| > 1 + 1e-9.
    static GptState make(const Eigen::Vector3d &omega1, const Eigen::Vector3d &omega2, const Eigen::Matrix3d &t);
};

struct GptEffect {
    Eigen::Vector3d e1 = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d e2 = Eigen::Vector3d::UnitZ();

    static GptEffect make(const Eigen::Vector3d &e1, const Eigen::Vector3d &e2);
};

/// ¼(1 + ω₁·e₁ + ω₂·e₂ + e₁ᵀ T e₂). Throws std::domain_error when the value
/// leaves [−1e-9, 1 + 1e-9].
double joint_probability(const GptState &state, const GptEffect &effect);

GptState gpt_state_from_density(const DensityOperator &rho);

/// Builds the state from fiducial tables: every pair of axes (±x, ±y, ±z)
/// must appear at least once; repeated pairs are averaged. Counts are
/// efficiency-corrected first. Throws std::invalid_argument naming the
/// first missing pair.
GptState gpt_from_counts(std::span<const CountsTable> tables);

/// (R₁ω₁, R₂ω₂, R₁TR₂ᵀ). Throws std::invalid_argument unless both matrices
/// are orthogonal within tol::kAlgebraic.
GptState apply_local_transform(const GptState &state, const Eigen::Matrix3d &r1, const Eigen::Matrix3d &r2);

/// One measurement-basis row. `label` has two characters, the basis of each
/// party, e.g. "HD" or "+R" (control in {+,−}, target in R/L). `p` holds
/// (p₁₂, p₁₂⊥, p₁⊥₂, p₁⊥₂⊥).
struct ProbabilityRow {
    std::string label;
    Quad p{};
};

struct ProbabilityTable {
    std::vector<ProbabilityRow> rows;

    /// Throws std::invalid_argument on malformed labels, probabilities
    /// outside [0, 1] or rows whose sum is further than `row_sum_tolerance`
    /// from 1.
    void validate(double row_sum_tolerance) const;
    const ProbabilityRow &at(const std::string &label) const;
};

/// Row sums of the printed comparison tables deviate from 1 by up to 0.05.
inline constexpr double kPrintedRowSumTolerance = 0.07;

void write_probability_csv(std::ostream &out, const ProbabilityTable &table);
ProbabilityTable read_probability_csv(std::istream &in, double row_sum_tolerance = kPrintedRowSumTolerance);

/// Products of single-party marginals. Each party's marginal for a basis is
/// averaged over every row that measures that party in that basis, with each
/// row renormalised to unit sum.
ProbabilityTable product_from_marginals(const ProbabilityTable &joint);

/// √(Σ (p_joint − p_product)² / N) over all rows and four outcomes. Throws
/// std::invalid_argument if the row labels differ.
double rms_product_distance(const ProbabilityTable &joint, const ProbabilityTable &product);

/// Joint table from counts, with the product of marginals alongside and
/// the per-row coincidence totals kept for resampling.
struct ProbabilityData {
    ProbabilityTable joint;
    ProbabilityTable product;
    std::vector<double> row_totals;  // 0 marks exact probabilities
};

/// Converts counts (efficiency-corrected) to probability rows. The table
/// setting_id is used as the row label.
ProbabilityData probability_data_from_counts(std::span<const CountsTable> tables);

/// Tables for `labels` measured on a two-qubit state. total_events = 0
/// gives exact probabilities.
ProbabilityData simulate_probability_data(const DensityOperator &rho, const std::vector<std::string> &labels,
                                          std::uint64_t total_events, std::uint64_t rng_seed);

/// Root-mean-square distance expected from counting statistics alone:
/// √E[d²] under multinomial resampling of the product distribution with the
/// recorded row totals. Zero when the totals are zero (exact input).
double bootstrap_sigma_stat(const ProbabilityData &data, int resamples, std::uint64_t rng_seed);

/// Row labels of the two comparison layouts.
std::vector<std::string> assumption1_labels();   // "HH" ... "LL", 36 rows
std::vector<std::string> assumption2b_labels();  // "+H", "+V", "+D", "+R", "+L"

struct ProductCheck {
    double distance = 0;
    double sigma_stat = 0;
    double sigma_sys = 0;
    bool pass = false;
};

/// Pass iff d ≤ 2(σ_stat + σ_sys) + tol::kAlgebraic.
ProductCheck judge_product_check(double distance, double sigma_stat, double sigma_sys);

/// Product-state test of the two input targets over the 36-row layout.
/// Throws std::invalid_argument if a layout row is missing.
ProductCheck check_assumption1(const ProbabilityTable &joint, const ProbabilityTable &product, double sigma_stat,
                               double sigma_sys);

struct Assumption2bCheck {
    ProductCheck order_ab;
    ProductCheck order_ba;
    bool pass = false;
};

struct Assumption2bInput {
    ProbabilityTable joint;
    ProbabilityTable product;
    double sigma_stat = 0;
    double sigma_sys = 0;
};

/// Control–target product test for both definite orders. Each table must
/// contain the rows +H, +V, +D, +R and +L.
Assumption2bCheck check_assumption2b(const Assumption2bInput &order_ab, const Assumption2bInput &order_ba);

}  // namespace switchsim
