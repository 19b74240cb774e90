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

#include "switchsim/gpt.h"

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "switchsim/csv.h"
#include "switchsim/rng.h"
#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

constexpr double kGptSlack = 1e-9;

void check_orthogonal(const Eigen::Matrix3d &r, const char *name) {
    if (!r.allFinite() || (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol::kAlgebraic) {
        throw std::invalid_argument(std::string("apply_local_transform: ") + name + " is not orthogonal");
    }
}

// Index i and sign s with axis = s·eᵢ, if the axis is a signed coordinate axis.
std::optional<std::pair<int, double>> coordinate_axis(const Eigen::Vector3d &a) {
    for (int i = 0; i < 3; ++i) {
        for (double s : {1.0, -1.0}) {
            if ((a - s * Eigen::Vector3d::Unit(i)).norm() < 1e-9) {
                return std::make_pair(i, s);
            }
        }
    }
    return std::nullopt;
}

void check_label(const std::string &label) {
    if (label.size() != 2) {
        throw std::invalid_argument("probability row label '" + label + "' must name two bases");
    }
    polarization_axis(label[0]);
    polarization_axis(label[1]);
}

const std::vector<std::string> kProbHeader = {"basis_label", "p12", "p12p", "p1p2", "p1p2p"};

Quad product_quad(double a, double b) {
    return {a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)};
}

}  // namespace

GptState GptState::make(const Eigen::Vector3d &omega1, const Eigen::Vector3d &omega2, const Eigen::Matrix3d &t) {
    if (!omega1.allFinite() || !omega2.allFinite() || !t.allFinite()) {
        throw std::invalid_argument("GptState: non-finite entry");
    }
    if (omega1.norm() > 1 + kGptSlack || omega2.norm() > 1 + kGptSlack) {
        throw std::invalid_argument("GptState: local vector longer than 1");
    }
    if (t.cwiseAbs().maxCoeff() > 1 + kGptSlack) {
        throw std::invalid_argument("GptState: tensor entry outside [-1, 1]");
    }
    return {omega1, omega2, t};
}

GptEffect GptEffect::make(const Eigen::Vector3d &e1, const Eigen::Vector3d &e2) {
    if (!e1.allFinite() || !e2.allFinite() || e1.norm() > 1 + kGptSlack || e2.norm() > 1 + kGptSlack) {
        throw std::invalid_argument("GptEffect: effect vectors must have norm at most 1");
    }
    return {e1, e2};
}

double joint_probability(const GptState &s, const GptEffect &e) {
    double p = 0.25 * (1.0 + s.omega1.dot(e.e1) + s.omega2.dot(e.e2) + e.e1.dot(s.t * e.e2));
    if (p < -kGptSlack || p > 1 + kGptSlack) {
        throw std::domain_error("joint_probability: state/effect pair gives probability " + std::to_string(p));
    }
    return p;
}

GptState gpt_state_from_density(const DensityOperator &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("gpt_state_from_density: expected a two-qubit state");
    }
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Vector3d w1, w2;
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i) {
        w1(i) = (kron(pauli(i), id) * rho.matrix()).trace().real();
        w2(i) = (kron(id, pauli(i)) * rho.matrix()).trace().real();
        for (int j = 0; j < 3; ++j) {
            t(i, j) = (kron(pauli(i), pauli(j)) * rho.matrix()).trace().real();
        }
    }
    return GptState::make(w1, w2, t);
}

GptState gpt_from_counts(std::span<const CountsTable> tables) {
    Eigen::Matrix3d t_sum = Eigen::Matrix3d::Zero();
    Eigen::Matrix3i t_n = Eigen::Matrix3i::Zero();
    Eigen::Vector3d w1_sum = Eigen::Vector3d::Zero(), w2_sum = Eigen::Vector3d::Zero();
    Eigen::Vector3i w1_n = Eigen::Vector3i::Zero(), w2_n = Eigen::Vector3i::Zero();
    for (const auto &raw : tables) {
        auto a1 = coordinate_axis(raw.axis1);
        auto a2 = coordinate_axis(raw.axis2);
        if (!a1 || !a2) {
            continue;
        }
        CountsTable c = efficiency_correct(raw);
        double total = c.total();
        if (!(total > 0)) {
            throw std::invalid_argument("gpt_from_counts: empty table '" + c.setting_id + "'");
        }
        const auto &n = c.counts;
        auto [i, s1] = *a1;
        auto [j, s2] = *a2;
        t_sum(i, j) += s1 * s2 * (n[0] - n[1] - n[2] + n[3]) / total;
        t_n(i, j) += 1;
        w1_sum(i) += s1 * (n[0] + n[1] - n[2] - n[3]) / total;
        w1_n(i) += 1;
        w2_sum(j) += s2 * (n[0] - n[1] + n[2] - n[3]) / total;
        w2_n(j) += 1;
    }
    const char *axes = "xyz";
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (t_n(i, j) == 0) {
                throw std::invalid_argument(std::string("gpt_from_counts: missing fiducial setting ") + axes[i] +
                                            axes[j]);
            }
        }
    }
    Eigen::Matrix3d t = t_sum.cwiseQuotient(t_n.cast<double>());
    Eigen::Vector3d w1 = w1_sum.cwiseQuotient(w1_n.cast<double>());
    Eigen::Vector3d w2 = w2_sum.cwiseQuotient(w2_n.cast<double>());
    return GptState::make(w1, w2, t);
}

GptState apply_local_transform(const GptState &s, const Eigen::Matrix3d &r1, const Eigen::Matrix3d &r2) {
    check_orthogonal(r1, "R1");
    check_orthogonal(r2, "R2");
    return GptState::make(r1 * s.omega1, r2 * s.omega2, r1 * s.t * r2.transpose());
}

void ProbabilityTable::validate(double row_sum_tolerance) const {
    if (rows.empty()) {
        throw std::invalid_argument("probability table has no rows");
    }
    std::map<std::string, int> seen;
    for (const auto &r : rows) {
        check_label(r.label);
        if (seen[r.label]++) {
            throw std::invalid_argument("probability table repeats row '" + r.label + "'");
        }
        double sum = 0;
        for (double p : r.p) {
            if (!std::isfinite(p) || p < -kGptSlack || p > 1 + kGptSlack) {
                throw std::invalid_argument("row '" + r.label + "': probability outside [0, 1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > row_sum_tolerance) {
            throw std::invalid_argument("row '" + r.label + "': probabilities sum to " + csv::format(sum));
        }
    }
}

const ProbabilityRow &ProbabilityTable::at(const std::string &label) const {
    for (const auto &r : rows) {
        if (r.label == label) {
            return r;
        }
    }
    throw std::invalid_argument("probability table has no row '" + label + "'");
}

void write_probability_csv(std::ostream &out, const ProbabilityTable &table) {
    out << csv::join(kProbHeader) << '\n';
    for (const auto &r : table.rows) {
        out << csv::join({r.label, csv::format(r.p[0]), csv::format(r.p[1]), csv::format(r.p[2]),
                          csv::format(r.p[3])})
            << '\n';
    }
}

ProbabilityTable read_probability_csv(std::istream &in, double row_sum_tolerance) {
    ProbabilityTable table;
    for (const auto &row : csv::read(in, kProbHeader)) {
        ProbabilityRow r{row.fields[0], {}};
        for (int k = 0; k < 4; ++k) {
            r.p[k] = csv::to_double(row, 1 + k);
        }
        try {
            ProbabilityTable single{{r}};
            single.validate(row_sum_tolerance);
        } catch (const std::invalid_argument &e) {
            throw std::runtime_error("csv line " + std::to_string(row.line) + ": " + e.what());
        }
        table.rows.push_back(std::move(r));
    }
    table.validate(row_sum_tolerance);
    return table;
}

ProbabilityTable product_from_marginals(const ProbabilityTable &joint) {
    joint.validate(1.0);
    std::map<char, std::pair<double, int>> m1, m2;
    for (const auto &r : joint.rows) {
        double sum = r.p[0] + r.p[1] + r.p[2] + r.p[3];
        if (!(sum > 0)) {
            throw std::invalid_argument("row '" + r.label + "' has zero total");
        }
        auto &a = m1[r.label[0]];
        a.first += (r.p[0] + r.p[1]) / sum;
        a.second += 1;
        auto &b = m2[r.label[1]];
        b.first += (r.p[0] + r.p[2]) / sum;
        b.second += 1;
    }
    ProbabilityTable out;
    for (const auto &r : joint.rows) {
        const auto &a = m1.at(r.label[0]);
        const auto &b = m2.at(r.label[1]);
        out.rows.push_back({r.label, product_quad(a.first / a.second, b.first / b.second)});
    }
    return out;
}

double rms_product_distance(const ProbabilityTable &joint, const ProbabilityTable &product) {
    if (joint.rows.empty() || joint.rows.size() != product.rows.size()) {
        throw std::invalid_argument("rms_product_distance: tables have different rows");
    }
    double sum = 0;
    for (const auto &r : joint.rows) {
        const auto &q = product.at(r.label);
        for (int k = 0; k < 4; ++k) {
            double d = r.p[k] - q.p[k];
            sum += d * d;
        }
    }
    return std::sqrt(sum / (4.0 * static_cast<double>(joint.rows.size())));
}

ProbabilityData probability_data_from_counts(std::span<const CountsTable> tables) {
    ProbabilityData data;
    for (const auto &raw : tables) {
        CountsTable c = efficiency_correct(raw);
        double total = c.total();
        if (!(total > 0)) {
            throw std::invalid_argument("probability_data_from_counts: empty table '" + c.setting_id + "'");
        }
        ProbabilityRow row{c.setting_id, {}};
        for (int k = 0; k < 4; ++k) {
            row.p[k] = c.counts[k] / total;
        }
        data.joint.rows.push_back(row);
        bool exact = std::abs(raw.total() - 1.0) < 1e-9 && raw.efficiencies == Quad{1, 1, 1, 1};
        data.row_totals.push_back(exact ? 0.0 : raw.total());
    }
    data.joint.validate(tol::kSpectral);
    data.product = product_from_marginals(data.joint);
    return data;
}

ProbabilityData simulate_probability_data(const DensityOperator &rho, const std::vector<std::string> &labels,
                                          std::uint64_t total_events, std::uint64_t rng_seed) {
    std::vector<CountsTable> tables;
    for (size_t k = 0; k < labels.size(); ++k) {
        check_label(labels[k]);
        auto setting = MeasurementSetting::from_labels(labels[k][0], labels[k][1]);
        tables.push_back(measure(rho, setting, labels[k], total_events, {1, 1, 1, 1}, derive_seed(rng_seed, k)));
    }
    return probability_data_from_counts(tables);
}

double bootstrap_sigma_stat(const ProbabilityData &data, int resamples, std::uint64_t rng_seed) {
    if (resamples < 1) {
        throw std::invalid_argument("bootstrap_sigma_stat: resamples must be positive");
    }
    if (data.row_totals.size() != data.product.rows.size()) {
        throw std::invalid_argument("bootstrap_sigma_stat: row totals do not match the table");
    }
    bool exact = true;
    for (double n : data.row_totals) {
        exact = exact && n == 0;
    }
    if (exact) {
        return 0.0;
    }
    double sum_sq = 0;
    for (int b = 0; b < resamples; ++b) {
        ProbabilityTable sample;
        for (size_t r = 0; r < data.product.rows.size(); ++r) {
            const auto &row = data.product.rows[r];
            auto n = static_cast<std::uint64_t>(std::llround(data.row_totals[r]));
            if (n == 0) {
                sample.rows.push_back(row);
                continue;
            }
            Quad p = row.p;
            double s = p[0] + p[1] + p[2] + p[3];
            for (double &x : p) {
                x /= s;
            }
            CountsTable c = simulate_counts(p, n, {1, 1, 1, 1}, derive_seed(derive_seed(rng_seed, b), r));
            ProbabilityRow out{row.label, {}};
            for (int k = 0; k < 4; ++k) {
                out.p[k] = c.counts[k] / static_cast<double>(n);
            }
            sample.rows.push_back(out);
        }
        double d = rms_product_distance(sample, product_from_marginals(sample));
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / resamples);
}

std::vector<std::string> assumption1_labels() {
    std::vector<std::string> out;
    for (char a : std::string("HVADRL")) {
        for (char b : std::string("HVADRL")) {
            out.push_back({a, b});
        }
    }
    return out;
}

std::vector<std::string> assumption2b_labels() {
    return {"+H", "+V", "+D", "+R", "+L"};
}

ProductCheck judge_product_check(double distance, double sigma_stat, double sigma_sys) {
    if (!(sigma_stat >= 0) || !(sigma_sys >= 0)) {
        throw std::invalid_argument("uncertainties must be non-negative");
    }
    return {distance, sigma_stat, sigma_sys, distance <= 2.0 * (sigma_stat + sigma_sys) + tol::kAlgebraic};
}

ProductCheck check_assumption1(const ProbabilityTable &joint, const ProbabilityTable &product, double sigma_stat,
                               double sigma_sys) {
    for (const auto &label : assumption1_labels()) {
        joint.at(label);
        product.at(label);
    }
    return judge_product_check(rms_product_distance(joint, product), sigma_stat, sigma_sys);
}

Assumption2bCheck check_assumption2b(const Assumption2bInput &ab, const Assumption2bInput &ba) {
    auto one = [](const Assumption2bInput &in) {
        for (const auto &label : assumption2b_labels()) {
            in.joint.at(label);
            in.product.at(label);
        }
        return judge_product_check(rms_product_distance(in.joint, in.product), in.sigma_stat, in.sigma_sys);
    };
    Assumption2bCheck out{one(ab), one(ba), false};
    out.pass = out.order_ab.pass && out.order_ba.pass;
    return out;
}

}  // namespace switchsim
