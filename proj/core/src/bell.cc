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

#include "switchsim/bell.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

void check_unit(const Eigen::Vector3d &v, const char *name) {
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > tol::kAlgebraic) {
        throw std::invalid_argument(std::string("CHSH setting ") + name + " must be a unit vector");
    }
}

struct Triplet {
    double s;
    Eigen::VectorXd u;
    Eigen::VectorXd v;
};

// Flip (u, v) jointly so the first non-negligible component of u is positive.
void normalise_sign(Triplet &t) {
    for (Eigen::Index k = 0; k < t.u.size(); ++k) {
        if (std::abs(t.u(k)) > 1e-12) {
            if (t.u(k) < 0) {
                t.u = -t.u;
                t.v = -t.v;
            }
            return;
        }
    }
}

bool lex_greater(const Eigen::VectorXd &x, const Eigen::VectorXd &y) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (std::abs(x(k) - y(k)) > 1e-12) {
            return x(k) > y(k);
        }
    }
    return false;
}

std::vector<Triplet> ordered_svd(const Eigen::MatrixXd &m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<Triplet> out;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        Triplet t{svd.singularValues()(k), svd.matrixU().col(k), svd.matrixV().col(k)};
        normalise_sign(t);
        out.push_back(std::move(t));
    }
    std::stable_sort(out.begin(), out.end(), [](const Triplet &x, const Triplet &y) {
        if (std::abs(x.s - y.s) > tol::kSpectral) {
            return x.s > y.s;
        }
        return lex_greater(x.u, y.u);
    });
    return out;
}

// Optimal settings for the top two singular triplets, with u and v already
// embedded in 3-space.
ChshMax build_max(double s1, double s2, const Eigen::Vector3d &u1, const Eigen::Vector3d &u2,
                  const Eigen::Vector3d &v1, const Eigen::Vector3d &v2) {
    ChshMax out;
    double norm = std::sqrt(s1 * s1 + s2 * s2);
    out.value = 2.0 * norm;
    Eigen::Vector3d b, b_prime;
    if (norm < 1e-15) {
        b = v1;
        b_prime = v1;
    } else {
        b = (s1 * v1 + s2 * v2) / norm;
        b_prime = (s1 * v1 - s2 * v2) / norm;
    }
    out.settings = ChshSettings::make(u1.normalized(), u2.normalized(), b.normalized(), b_prime.normalized());
    return out;
}

Eigen::Matrix<double, 3, 2> plane_basis(BlochPlane p) {
    Eigen::Matrix<double, 3, 2> b = Eigen::Matrix<double, 3, 2>::Zero();
    switch (p) {
        case BlochPlane::kXY:
            b(0, 0) = 1;
            b(1, 1) = 1;
            break;
        case BlochPlane::kXZ:
            b(0, 0) = 1;
            b(2, 1) = 1;
            break;
        case BlochPlane::kYZ:
            b(1, 0) = 1;
            b(2, 1) = 1;
            break;
    }
    return b;
}

}  // namespace

ChshSettings ChshSettings::make(const Eigen::Vector3d &a, const Eigen::Vector3d &a_prime, const Eigen::Vector3d &b,
                                const Eigen::Vector3d &b_prime) {
    check_unit(a, "a");
    check_unit(a_prime, "a'");
    check_unit(b, "b");
    check_unit(b_prime, "b'");
    return {a, a_prime, b, b_prime};
}

std::array<MeasurementSetting, 4> ChshSettings::measurement_settings() const {
    return {MeasurementSetting{a, b}, MeasurementSetting{a_prime, b}, MeasurementSetting{a, b_prime},
            MeasurementSetting{a_prime, b_prime}};
}

CorrelationTensor CorrelationTensor::make(const Eigen::Matrix3d &t) {
    if (!t.allFinite() || t.cwiseAbs().maxCoeff() > 1.0 + tol::kSpectral) {
        throw std::invalid_argument("correlation tensor entries must lie in [-1, 1]");
    }
    return {t};
}

CorrelationTensor correlation_tensor(const DensityOperator &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("correlation_tensor: expected a two-qubit state");
    }
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            t(i, j) = (kron(pauli(i), pauli(j)) * rho.matrix()).trace().real();
        }
    }
    return CorrelationTensor::make(t);
}

double chsh_value(const CorrelationTensor &tensor, const ChshSettings &s) {
    const Eigen::Matrix3d &t = tensor.t;
    double v = s.a.dot(t * s.b) + s.a_prime.dot(t * s.b) + s.a.dot(t * s.b_prime) - s.a_prime.dot(t * s.b_prime);
    return std::abs(v);
}

double chsh_value(const DensityOperator &rho, const ChshSettings &settings) {
    return chsh_value(correlation_tensor(rho), settings);
}

ChshMax chsh_max(const CorrelationTensor &tensor) {
    auto trip = ordered_svd(tensor.t);
    ChshMax out = build_max(trip[0].s, trip[1].s, trip[0].u, trip[1].u, trip[0].v, trip[1].v);
    out.singular_values = Eigen::Vector3d(trip[0].s, trip[1].s, trip[2].s);
    return out;
}

ChshMax chsh_max_in_planes(const CorrelationTensor &tensor, BlochPlane plane1, BlochPlane plane2) {
    Eigen::Matrix<double, 3, 2> p1 = plane_basis(plane1);
    Eigen::Matrix<double, 3, 2> p2 = plane_basis(plane2);
    Eigen::Matrix2d block = p1.transpose() * tensor.t * p2;
    auto trip = ordered_svd(block);
    ChshMax out = build_max(trip[0].s, trip[1].s, p1 * trip[0].u, p1 * trip[1].u, p2 * trip[0].v, p2 * trip[1].v);
    out.singular_values = Eigen::Vector3d(trip[0].s, trip[1].s, 0.0);
    return out;
}

ChshEstimate chsh_from_counts(std::span<const CountsTable, 4> tables) {
    ChshEstimate est;
    double var = 0;
    for (int k = 0; k < 4; ++k) {
        const CountsTable &raw = tables[k];
        raw.validate();
        if (!(raw.total() > 0)) {
            throw std::invalid_argument("chsh_from_counts: empty table '" + raw.setting_id + "'");
        }
        double c = correlation(efficiency_correct(raw));
        est.correlations[k] = c;
        bool exact = std::abs(raw.total() - 1.0) < 1e-9 && raw.efficiencies == Quad{1, 1, 1, 1};
        if (!exact) {
            var += std::max(0.0, 1.0 - c * c) / raw.total();
        }
    }
    const auto &c = est.correlations;
    est.value = std::abs(c[0] + c[1] + c[2] - c[3]);
    est.sigma = std::sqrt(var);
    return est;
}

}  // namespace switchsim
