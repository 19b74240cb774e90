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

#include "switchsim/tomography.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "switchsim/rng.h"
#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

constexpr const char *kBasisLabels = "HVDARL";

struct Outcome {
    Eigen::Matrix4cd projector;
    double weight;     // efficiency-corrected count
    double frequency;  // weight / setting total
};

std::vector<Outcome> outcomes(const TomographyRecord &rec) {
    rec.validate();
    std::vector<Outcome> out;
    out.reserve(rec.tables.size() * 4);
    for (const auto &raw : rec.tables) {
        CountsTable t = efficiency_correct(raw);
        double total = t.total();
        if (!(total > 0)) {
            throw std::invalid_argument("tomography: empty table '" + t.setting_id + "'");
        }
        int k = 0;
        for (bool s1 : {true, false}) {
            for (bool s2 : {true, false}) {
                Eigen::Matrix4cd p = kron(bloch_projector(t.axis1, s1), bloch_projector(t.axis2, s2));
                out.push_back({p, t.counts[k], t.counts[k] / total});
                ++k;
            }
        }
    }
    return out;
}

Eigen::Matrix4cd pauli_pair(int i, int j) {
    auto single = [](int a) -> Eigen::Matrix2cd { return a == 0 ? Eigen::Matrix2cd::Identity() : pauli(a - 1); };
    return kron(single(i), single(j));
}

double mean_log_likelihood(const std::vector<Outcome> &obs, const Eigen::Matrix4cd &rho, double total_weight) {
    double sum = 0;
    for (const auto &o : obs) {
        if (o.weight <= 0) {
            continue;
        }
        double p = (o.projector * rho).trace().real();
        if (p <= 0) {
            return -std::numeric_limits<double>::infinity();
        }
        sum += o.weight * std::log(p);
    }
    return sum / total_weight;
}

Eigen::Vector3d axis_from_json(const nlohmann::json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 3) {
        throw std::runtime_error(where + ": axis must be an array of three numbers");
    }
    Eigen::Vector3d a;
    for (int k = 0; k < 3; ++k) {
        if (!j[k].is_number()) {
            throw std::runtime_error(where + ": axis component " + std::to_string(k) + " is not a number");
        }
        a(k) = j[k].get<double>();
    }
    return a;
}

}  // namespace

std::vector<LabeledSetting> pauli_basis_settings() {
    std::vector<LabeledSetting> out;
    for (const char *a = kBasisLabels; *a; ++a) {
        for (const char *b = kBasisLabels; *b; ++b) {
            out.push_back({std::string{*a, *b}, MeasurementSetting::from_labels(*a, *b)});
        }
    }
    return out;
}

void TomographyRecord::validate() const {
    if (tables.empty()) {
        throw std::invalid_argument("tomography record has no tables");
    }
    for (const auto &t : tables) {
        t.validate();
    }
}

TomographyRecord simulate_tomography(const DensityOperator &rho, const std::vector<LabeledSetting> &settings,
                                     std::uint64_t total_events, const Quad &efficiencies, std::uint64_t rng_seed) {
    TomographyRecord rec;
    rec.tables.reserve(settings.size());
    for (size_t k = 0; k < settings.size(); ++k) {
        rec.tables.push_back(measure(rho, settings[k].setting, settings[k].id, total_events, efficiencies,
                                     derive_seed(rng_seed, k)));
    }
    return rec;
}

LinearEstimate reconstruct_linear(const TomographyRecord &rec, const Labels &labels) {
    auto obs = outcomes(rec);
    Eigen::MatrixXd a(obs.size(), 16);
    Eigen::VectorXd f(obs.size());
    for (size_t r = 0; r < obs.size(); ++r) {
        for (int c = 0; c < 16; ++c) {
            a(r, c) = 0.25 * (obs[r].projector * pauli_pair(c / 4, c % 4)).trace().real();
        }
        f(r) = obs[r].frequency;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    if (sv.size() < 16 || sv(15) < 1e-9 * sv(0)) {
        throw std::invalid_argument("reconstruct_linear: settings are not tomographically complete");
    }
    Eigen::VectorXd coef = svd.solve(f);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int c = 0; c < 16; ++c) {
        m += 0.25 * coef(c) * pauli_pair(c / 4, c % 4);
    }
    m = 0.5 * (m + m.adjoint()).eval();
    double tr = m.trace().real();
    if (!(std::abs(tr) > tol::kUnreachable)) {
        throw std::invalid_argument("reconstruct_linear: estimate has zero trace");
    }
    m /= tr;
    DensityOperator rho(m, labels);
    double min_eig = rho.min_eigenvalue();
    return {rho, min_eig, min_eig < -tol::kSpectral};
}

DensityOperator project_to_physical(const DensityOperator &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
    Eigen::VectorXd ev = es.eigenvalues();
    std::vector<double> sorted(ev.data(), ev.data() + ev.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0;
    double shift = 0;
    for (size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0) {
            shift = t;
        }
    }
    Eigen::VectorXd proj = (ev.array() - shift).cwiseMax(0.0);
    Eigen::MatrixXcd m = es.eigenvectors() * proj.asDiagonal() * es.eigenvectors().adjoint();
    return DensityOperator(0.5 * (m + m.adjoint()), rho.labels());
}

double log_likelihood(const TomographyRecord &rec, const DensityOperator &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("log_likelihood: expected a two-qubit state");
    }
    auto obs = outcomes(rec);
    double total = 0;
    for (const auto &o : obs) {
        total += o.weight;
    }
    return mean_log_likelihood(obs, rho.matrix(), total);
}

namespace {

// Diluted RρR ascent from `rho`; each accepted step does not lower the
// likelihood.
MleEstimate ascend(const std::vector<Outcome> &obs, double total, Eigen::Matrix4cd rho, const MleOptions &options,
                   const Labels &labels) {
    double logl = mean_log_likelihood(obs, rho, total);
    MleEstimate est{DensityOperator(rho, labels), logl, 0, false, {}};
    if (options.record_trace) {
        est.likelihood_trace.push_back(logl);
    }

    constexpr double kMaxStep = 1e4;
    constexpr double kMinStep = 1e-12;
    double eps = 1.0;
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
        for (const auto &o : obs) {
            if (o.weight > 0) {
                r += (o.weight / (total * (o.projector * rho).trace().real())) * o.projector;
            }
        }
        bool accepted = false;
        Eigen::Matrix4cd next;
        double next_logl = logl;
        while (eps >= kMinStep) {
            Eigen::Matrix4cd step = (id + eps * r) / (1.0 + eps);
            next = step * rho * step.adjoint();
            next = 0.5 * (next + next.adjoint()).eval();
            next /= next.trace().real();
            next_logl = mean_log_likelihood(obs, next, total);
            if (next_logl >= logl) {
                accepted = true;
                break;
            }
            eps *= 0.5;
        }
        if (!accepted) {
            est.converged = true;
            break;
        }
        double gain = next_logl - logl;
        rho = next;
        logl = next_logl;
        if (options.record_trace) {
            est.likelihood_trace.push_back(logl);
        }
        eps = std::min(kMaxStep, eps * 2.0);
        if (gain < options.tolerance) {
            est.converged = true;
            ++it;
            break;
        }
    }
    est.rho = DensityOperator(rho, labels);
    est.log_likelihood = logl;
    est.iterations = it;
    return est;
}

}  // namespace

MleEstimate reconstruct_mle(const TomographyRecord &rec, const MleOptions &options, const Labels &labels) {
    if (options.max_iterations < 1 || !(options.tolerance > 0)) {
        throw std::invalid_argument("reconstruct_mle: invalid options");
    }
    auto obs = outcomes(rec);
    double total = 0;
    for (const auto &o : obs) {
        total += o.weight;
    }
    if (!(total > 0)) {
        throw std::invalid_argument("reconstruct_mle: record has no counts");
    }

    // RρR cannot grow a zero eigenvalue and approaches the boundary only
    // slowly, so ascend from an interior start and from one next to the
    // projected linear estimate, and keep the better of the two.
    const Eigen::Matrix4cd start = project_to_physical(reconstruct_linear(rec, labels).rho).matrix();
    const Eigen::Matrix4cd white = Eigen::Matrix4cd::Identity() / 4.0;
    MleEstimate interior = ascend(obs, total, 0.99 * start + 0.01 * white, options, labels);
    MleEstimate boundary = ascend(obs, total, (1 - 1e-9) * start + 1e-9 * white, options, labels);
    return boundary.log_likelihood >= interior.log_likelihood ? boundary : interior;
}

void write_tomography_record(const std::filesystem::path &json_path, const TomographyRecord &rec) {
    rec.validate();
    std::filesystem::path csv_path = json_path;
    csv_path.replace_extension(".csv");
    nlohmann::json header;
    header["format"] = "switchsim-tomography";
    header["version"] = 1;
    header["counts_file"] = csv_path.filename().string();
    header["settings"] = nlohmann::json::array();
    for (const auto &t : rec.tables) {
        header["settings"].push_back({{"id", t.setting_id},
                                      {"axis1", {t.axis1(0), t.axis1(1), t.axis1(2)}},
                                      {"axis2", {t.axis2(0), t.axis2(1), t.axis2(2)}}});
    }
    std::ofstream js(json_path);
    std::ofstream cs(csv_path);
    if (!js || !cs) {
        throw std::runtime_error("cannot write tomography record to " + json_path.string());
    }
    js << header.dump(2) << '\n';
    write_counts_csv(cs, rec.tables);
}

TomographyRecord read_tomography_record(const std::filesystem::path &json_path) {
    std::ifstream js(json_path);
    if (!js) {
        throw std::runtime_error("cannot open " + json_path.string());
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(js);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::runtime_error(json_path.string() + ": " + e.what());
    }
    if (header.value("format", "") != "switchsim-tomography") {
        throw std::runtime_error(json_path.string() + ": not a tomography record");
    }
    if (!header.contains("settings") || !header["settings"].is_array()) {
        throw std::runtime_error(json_path.string() + ": missing settings list");
    }
    std::filesystem::path csv_path = json_path.parent_path() / header.value("counts_file", "");
    std::ifstream cs(csv_path);
    if (!cs) {
        throw std::runtime_error("cannot open " + csv_path.string());
    }
    TomographyRecord rec{read_counts_csv(cs)};
    const auto &settings = header["settings"];
    if (settings.size() != rec.tables.size()) {
        throw std::runtime_error(json_path.string() + ": settings list and counts file disagree in length");
    }
    for (size_t k = 0; k < settings.size(); ++k) {
        std::string where = json_path.string() + ": settings[" + std::to_string(k) + "]";
        const auto &t = rec.tables[k];
        if (settings[k].value("id", "") != t.setting_id) {
            throw std::runtime_error(where + ": id does not match counts row '" + t.setting_id + "'");
        }
        if ((axis_from_json(settings[k]["axis1"], where) - t.axis1).norm() > tol::kAlgebraic ||
            (axis_from_json(settings[k]["axis2"], where) - t.axis2).norm() > tol::kAlgebraic) {
            throw std::runtime_error(where + ": axes do not match counts row '" + t.setting_id + "'");
        }
    }
    rec.validate();
    return rec;
}

}  // namespace switchsim
