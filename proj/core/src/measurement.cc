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

#include "switchsim/measurement.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "switchsim/csv.h"
#include "switchsim/rng.h"
#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

void check_unit(const Eigen::Vector3d &axis, const char *name) {
    if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > tol::kAlgebraic) {
        throw std::invalid_argument(std::string(name) + " must be a unit vector");
    }
}

std::string axis_to_string(const Eigen::Vector3d &a) {
    return csv::format(a(0)) + ";" + csv::format(a(1)) + ";" + csv::format(a(2));
}

Eigen::Vector3d axis_from_string(const csv::Row &row, size_t column) {
    std::stringstream ss(row.fields.at(column));
    Eigen::Vector3d a;
    std::string part;
    for (int k = 0; k < 3; ++k) {
        if (!std::getline(ss, part, ';')) {
            throw std::runtime_error("csv line " + std::to_string(row.line) + ": axis must be written as x;y;z");
        }
        csv::Row tmp{row.line, {part}};
        a(k) = csv::to_double(tmp, 0);
    }
    if (std::getline(ss, part, ';')) {
        throw std::runtime_error("csv line " + std::to_string(row.line) + ": axis has more than three components");
    }
    return a;
}

}  // namespace

MeasurementSetting MeasurementSetting::make(const Eigen::Vector3d &axis1, const Eigen::Vector3d &axis2) {
    check_unit(axis1, "axis1");
    check_unit(axis2, "axis2");
    return {axis1, axis2};
}

MeasurementSetting MeasurementSetting::from_labels(char basis1, char basis2) {
    return make(polarization_axis(basis1), polarization_axis(basis2));
}

Eigen::Vector3d polarization_axis(char label) {
    switch (label) {
        case 'H':
        case '0':
            return Eigen::Vector3d::UnitZ();
        case 'V':
        case '1':
            return -Eigen::Vector3d::UnitZ();
        case 'D':
        case '+':
            return Eigen::Vector3d::UnitX();
        case 'A':
        case '-':
            return -Eigen::Vector3d::UnitX();
        case 'L':
        case 'l':
            return Eigen::Vector3d::UnitY();
        case 'R':
        case 'r':
            return -Eigen::Vector3d::UnitY();
        default:
            throw std::invalid_argument(std::string("unknown basis label '") + label + "'");
    }
}

Eigen::Vector3d equatorial_axis(double phase) {
    return {std::cos(phase), -std::sin(phase), 0.0};
}

void CountsTable::validate() const {
    for (int k = 0; k < 4; ++k) {
        if (!(counts[k] >= 0) || !std::isfinite(counts[k])) {
            throw std::invalid_argument("counts must be finite and non-negative");
        }
        if (!(efficiencies[k] > 0 && efficiencies[k] <= 1)) {
            throw std::invalid_argument("detector-pair efficiencies must lie in (0, 1]");
        }
    }
}

Quad born_probabilities(const DensityOperator &rho, const MeasurementSetting &setting) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("born_probabilities: expected a two-qubit state");
    }
    Quad out{};
    int k = 0;
    for (bool s1 : {true, false}) {
        for (bool s2 : {true, false}) {
            Eigen::Matrix4cd proj = kron(bloch_projector(setting.axis1, s1), bloch_projector(setting.axis2, s2));
            out[k++] = (proj * rho.matrix()).trace().real();
        }
    }
    return out;
}

CountsTable simulate_counts(const Quad &probs, std::uint64_t total_events, const Quad &efficiencies,
                            std::uint64_t rng_seed) {
    double sum = 0;
    Quad p{};
    for (int k = 0; k < 4; ++k) {
        if (probs[k] < -tol::kSpectral || !std::isfinite(probs[k])) {
            throw std::invalid_argument("simulate_counts: probabilities must be non-negative");
        }
        p[k] = std::max(0.0, probs[k]);
        sum += p[k];
    }
    if (std::abs(sum - 1.0) > tol::kSpectral) {
        throw std::invalid_argument("simulate_counts: probabilities must sum to 1");
    }
    if (total_events == 0) {
        throw std::invalid_argument("simulate_counts: total_events must be positive");
    }
    CountsTable table;
    table.efficiencies = efficiencies;
    table.validate();

    Rng rng = make_stream(rng_seed);
    std::uint64_t remaining = total_events;
    double mass = 1.0;
    for (int k = 0; k < 4; ++k) {
        std::uint64_t n = 0;
        if (k == 3) {
            n = remaining;
        } else if (remaining > 0 && p[k] > 0) {
            double q = std::min(1.0, p[k] / mass);
            n = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
        }
        mass -= p[k];
        remaining -= n;
        if (mass <= 0) {
            mass = 0;
        }
        std::uint64_t kept = n;
        if (efficiencies[k] < 1.0 && n > 0) {
            kept = std::binomial_distribution<std::uint64_t>(n, efficiencies[k])(rng);
        }
        table.counts[k] = static_cast<double>(kept);
    }
    return table;
}

CountsTable measure(const DensityOperator &rho, const MeasurementSetting &setting, std::string setting_id,
                    std::uint64_t total_events, const Quad &efficiencies, std::uint64_t rng_seed) {
    Quad probs = born_probabilities(rho, setting);
    CountsTable table;
    if (total_events == 0) {
        table.counts = probs;
        for (auto &c : table.counts) {
            c = std::max(0.0, c);
        }
    } else {
        table = simulate_counts(probs, total_events, efficiencies, rng_seed);
    }
    table.setting_id = std::move(setting_id);
    table.axis1 = setting.axis1;
    table.axis2 = setting.axis2;
    return table;
}

CountsTable efficiency_correct(const CountsTable &counts) {
    CountsTable out = counts;
    for (int k = 0; k < 4; ++k) {
        if (!(counts.efficiencies[k] > 0)) {
            throw std::invalid_argument("efficiency_correct: zero efficiency for setting '" + counts.setting_id + "'");
        }
        out.counts[k] = counts.counts[k] / counts.efficiencies[k];
        out.efficiencies[k] = 1.0;
    }
    return out;
}

double correlation(const CountsTable &counts) {
    double total = counts.total();
    if (!(total > 0)) {
        throw std::invalid_argument("correlation: empty counts table '" + counts.setting_id + "'");
    }
    const auto &n = counts.counts;
    return (n[0] - n[1] - n[2] + n[3]) / total;
}

double expected_correlation(const DensityOperator &rho, const MeasurementSetting &setting) {
    Eigen::Matrix4cd op = kron(bloch_operator(setting.axis1), bloch_operator(setting.axis2));
    return (op * rho.matrix()).trace().real();
}

static const std::vector<std::string> kCountsHeader = {"setting_id", "axis1",  "axis2",  "npp",    "npm",   "nmp",
                                                       "nmm",        "eff_pp", "eff_pm", "eff_mp", "eff_mm"};

void write_counts_csv(std::ostream &out, const std::vector<CountsTable> &tables) {
    out << csv::join(kCountsHeader) << '\n';
    for (const auto &t : tables) {
        std::vector<std::string> f{t.setting_id, axis_to_string(t.axis1), axis_to_string(t.axis2)};
        for (double c : t.counts) {
            f.push_back(csv::format(c));
        }
        for (double e : t.efficiencies) {
            f.push_back(csv::format(e));
        }
        out << csv::join(f) << '\n';
    }
}

std::vector<CountsTable> read_counts_csv(std::istream &in) {
    std::vector<CountsTable> tables;
    for (const auto &row : csv::read(in, kCountsHeader)) {
        CountsTable t;
        t.setting_id = row.fields[0];
        t.axis1 = axis_from_string(row, 1);
        t.axis2 = axis_from_string(row, 2);
        for (int k = 0; k < 4; ++k) {
            t.counts[k] = csv::to_double(row, 3 + k);
            t.efficiencies[k] = csv::to_double(row, 7 + k);
        }
        try {
            t.validate();
        } catch (const std::invalid_argument &e) {
            throw std::runtime_error("csv line " + std::to_string(row.line) + ": " + e.what());
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

}  // namespace switchsim
