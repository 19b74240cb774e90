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

#include "switchsim/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "switchsim/gates.h"
#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

size_t checked_qubit_count(Eigen::Index dim, const Labels &labels, const char *what) {
    if (dim <= 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument(std::string(what) + " dimension " + std::to_string(dim) + " is not a power of two");
    }
    size_t n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if (n != labels.size()) {
        throw std::invalid_argument(
            std::string(what) + " has " + std::to_string(n) + " qubits but " + std::to_string(labels.size()) + " labels");
    }
    std::set<std::string> seen;
    for (const auto &l : labels) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument(std::string(what) + " has duplicate subsystem tag '" + l + "'");
        }
    }
    return n;
}

void check_disjoint(const Labels &a, const Labels &b) {
    for (const auto &l : b) {
        if (std::find(a.begin(), a.end(), l) != a.end()) {
            throw std::invalid_argument("tensor: duplicate subsystem tag '" + l + "'");
        }
    }
}

Labels concat(const Labels &a, const Labels &b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Bit of qubit at register position `pos` (position 0 is the most significant).
inline size_t bit_at(size_t index, size_t pos, size_t n) {
    return (index >> (n - 1 - pos)) & 1U;
}

// perm[new_index] = old_index for moving the register into `order`.
std::vector<size_t> permutation_for(const Labels &from, const Labels &order) {
    if (order.size() != from.size()) {
        throw std::invalid_argument("reorder: expected " + std::to_string(from.size()) + " tags");
    }
    size_t n = from.size();
    std::vector<size_t> source_pos(n);
    for (size_t q = 0; q < n; ++q) {
        source_pos[q] = label_index(from, order[q]);
    }
    std::set<size_t> distinct(source_pos.begin(), source_pos.end());
    if (distinct.size() != n) {
        throw std::invalid_argument("reorder: tag order contains duplicates");
    }
    size_t dim = size_t{1} << n;
    std::vector<size_t> perm(dim);
    for (size_t j = 0; j < dim; ++j) {
        size_t old = 0;
        for (size_t q = 0; q < n; ++q) {
            size_t b = bit_at(j, q, n);
            old |= b << (n - 1 - source_pos[q]);
        }
        perm[j] = old;
    }
    return perm;
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd &m) {
    return (m + m.adjoint()) / 2.0;
}

}  // namespace

size_t label_index(const Labels &labels, std::string_view label) {
    for (size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) {
            return k;
        }
    }
    throw std::invalid_argument("unknown subsystem tag '" + std::string(label) + "'");
}

StateVector::StateVector(Eigen::VectorXcd amplitudes, Labels labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    checked_qubit_count(amplitudes_.size(), labels_, "state vector");
}

StateVector StateVector::qubit(char name, std::string label) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i{0, 1};
    Eigen::Vector2cd v;
    switch (name) {
        case '0':
        case 'H':
            v << 1, 0;
            break;
        case '1':
        case 'V':
            v << 0, 1;
            break;
        case '+':
        case 'D':
            v << s, s;
            break;
        case '-':
        case 'A':
            v << s, -s;
            break;
        case 'R':
        case 'r':
            v << s, -i * s;
            break;
        case 'L':
        case 'l':
            v << s, i * s;
            break;
        default:
            throw std::invalid_argument(std::string("unknown single-qubit state '") + name + "'");
    }
    return StateVector(v, {std::move(label)});
}

StateVector StateVector::basis(std::string_view bits, Labels labels) {
    size_t n = bits.size();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("basis: bit string may only contain 0 and 1");
        }
        index = (index << 1) | static_cast<size_t>(c - '0');
    }
    v(static_cast<Eigen::Index>(index)) = 1;
    return StateVector(v, std::move(labels));
}

bool StateVector::is_normalized() const {
    return std::abs(amplitudes_.norm() - 1.0) <= tol::kNorm;
}

StateVector StateVector::normalized() const {
    double n = amplitudes_.norm();
    if (n == 0) {
        throw std::domain_error("cannot normalise the zero vector");
    }
    return StateVector(amplitudes_ / n, labels_);
}

StateVector StateVector::relabeled(Labels labels) const {
    return StateVector(amplitudes_, std::move(labels));
}

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix, Labels labels)
    : matrix_(std::move(matrix)), labels_(std::move(labels)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("density operator must be square");
    }
    checked_qubit_count(matrix_.rows(), labels_, "density operator");
    double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol::kAlgebraic) {
        throw std::invalid_argument("density operator is not Hermitian (max deviation " + std::to_string(dev) + ")");
    }
    matrix_ = hermitian_part(matrix_);
}

DensityOperator DensityOperator::from_pure(const StateVector &psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint(), psi.labels());
}

DensityOperator DensityOperator::maximally_mixed(Labels labels) {
    auto d = Eigen::Index{1} << labels.size();
    return DensityOperator(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d), std::move(labels));
}

double DensityOperator::trace() const {
    return matrix_.trace().real();
}

Eigen::VectorXd DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityOperator::min_eigenvalue() const {
    return eigenvalues().minCoeff();
}

bool DensityOperator::is_normalized() const {
    return std::abs(trace() - 1.0) <= tol::kAlgebraic;
}

bool DensityOperator::is_positive() const {
    return min_eigenvalue() >= -tol::kSpectral;
}

DensityOperator DensityOperator::normalized() const {
    double t = trace();
    if (t <= 0) {
        throw std::domain_error("cannot normalise an operator with non-positive trace");
    }
    return DensityOperator(matrix_ / t, labels_);
}

DensityOperator DensityOperator::relabeled(Labels labels) const {
    return DensityOperator(matrix_, std::move(labels));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    check_disjoint(a.labels(), b.labels());
    return StateVector(kron(a.amplitudes(), b.amplitudes()), concat(a.labels(), b.labels()));
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    check_disjoint(a.labels(), b.labels());
    return DensityOperator(kron(a.matrix(), b.matrix()), concat(a.labels(), b.labels()));
}

DensityOperator partial_trace(const DensityOperator &rho, const Labels &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    }
    const size_t n = rho.num_qubits();
    std::vector<bool> kept(n, false);
    for (const auto &l : keep) {
        size_t p = label_index(rho.labels(), l);
        if (kept[p]) {
            throw std::invalid_argument("partial_trace: duplicate tag '" + l + "' in keep set");
        }
        kept[p] = true;
    }
    std::vector<size_t> keep_pos, trace_pos;
    Labels out_labels;
    for (size_t p = 0; p < n; ++p) {
        if (kept[p]) {
            keep_pos.push_back(p);
            out_labels.push_back(rho.labels()[p]);
        } else {
            trace_pos.push_back(p);
        }
    }
    const size_t nk = keep_pos.size();
    const size_t nt = trace_pos.size();
    auto full_index = [&](size_t k_idx, size_t t_idx) {
        size_t idx = 0;
        for (size_t q = 0; q < nk; ++q) {
            idx |= ((k_idx >> (nk - 1 - q)) & 1U) << (n - 1 - keep_pos[q]);
        }
        for (size_t q = 0; q < nt; ++q) {
            idx |= ((t_idx >> (nt - 1 - q)) & 1U) << (n - 1 - trace_pos[q]);
        }
        return static_cast<Eigen::Index>(idx);
    };
    const size_t dk = size_t{1} << nk;
    const size_t dt = size_t{1} << nt;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (size_t r = 0; r < dk; ++r) {
        for (size_t c = 0; c < dk; ++c) {
            cplx acc = 0;
            for (size_t t = 0; t < dt; ++t) {
                acc += rho.matrix()(full_index(r, t), full_index(c, t));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityOperator(out, out_labels);
}

StateVector reorder(const StateVector &psi, const Labels &order) {
    auto perm = permutation_for(psi.labels(), order);
    Eigen::VectorXcd out(psi.amplitudes().size());
    for (size_t j = 0; j < perm.size(); ++j) {
        out(static_cast<Eigen::Index>(j)) = psi.amplitudes()(static_cast<Eigen::Index>(perm[j]));
    }
    return StateVector(out, order);
}

DensityOperator reorder(const DensityOperator &rho, const Labels &order) {
    auto perm = permutation_for(rho.labels(), order);
    auto d = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            out(r, c) = rho.matrix()(static_cast<Eigen::Index>(perm[r]), static_cast<Eigen::Index>(perm[c]));
        }
    }
    return DensityOperator(out, order);
}

namespace {

Eigen::MatrixXcd embed(const Eigen::Matrix2cd &u, size_t pos, size_t n) {
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(Eigen::Index{1} << pos, Eigen::Index{1} << pos);
    Eigen::MatrixXcd right = Eigen::MatrixXcd::Identity(Eigen::Index{1} << (n - 1 - pos), Eigen::Index{1} << (n - 1 - pos));
    return kron(kron(left, u), right);
}

}  // namespace

StateVector apply_gate(const StateVector &psi, const GateSpec &gate, std::string_view label) {
    size_t pos = label_index(psi.labels(), label);
    return StateVector(embed(gate.matrix, pos, psi.num_qubits()) * psi.amplitudes(), psi.labels());
}

DensityOperator apply_gate(const DensityOperator &rho, const GateSpec &gate, std::string_view label) {
    size_t pos = label_index(rho.labels(), label);
    Eigen::MatrixXcd u = embed(gate.matrix, pos, rho.num_qubits());
    return DensityOperator(hermitian_part(u * rho.matrix() * u.adjoint()), rho.labels());
}

double fidelity(const DensityOperator &rho, const StateVector &target) {
    if (rho.dim() != target.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                                    std::to_string(target.dim()) + ")");
    }
    const Eigen::VectorXcd psi =
        target.labels() == rho.labels() ? target.amplitudes() : reorder(target, rho.labels()).amplitudes();
    return (psi.adjoint() * rho.matrix() * psi)(0, 0).real() / psi.squaredNorm();
}

namespace {

// The spin-flip values λ are the singular values of Xᵀ(σy⊗σy)X with ρ = XX†.
// Working on the numerical support of ρ avoids square roots of rounding
// noise, which would otherwise cost about eight digits on rank-deficient
// states.
double wootters(const Eigen::Matrix4cd &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const Eigen::Vector4d &ev = es.eigenvalues();
    const double cutoff = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Eigen::MatrixXcd x(4, 0);
    for (int k = 0; k < 4; ++k) {
        if (ev(k) > cutoff) {
            x.conservativeResize(Eigen::NoChange, x.cols() + 1);
            x.col(x.cols() - 1) = es.eigenvectors().col(k) * std::sqrt(ev(k));
        }
    }
    if (x.cols() == 0) {
        return 0.0;
    }
    Eigen::Matrix4cd yy = kron(pauli_y(), pauli_y());
    Eigen::MatrixXcd m = x.transpose() * yy * x;
    Eigen::VectorXd lam = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();  // descending
    double c = lam(0);
    for (Eigen::Index k = 1; k < lam.size(); ++k) {
        c -= lam(k);
    }
    return std::max(0.0, c);
}

Eigen::Matrix4cd as_two_qubit(const DensityOperator &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("concurrence requires a two-qubit state");
    }
    return rho.matrix();
}

}  // namespace

double concurrence(const DensityOperator &rho) {
    Eigen::Matrix4cd m = as_two_qubit(rho);
    double lo = rho.min_eigenvalue();
    if (lo < -tol::kSpectral) {
        throw std::domain_error("concurrence: input is not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")");
    }
    return wootters(m / m.trace().real());
}

ConcurrenceResult concurrence_clipped(const DensityOperator &rho) {
    as_two_qubit(rho);
    bool clipped = rho.min_eigenvalue() < -tol::kSpectral;
    return {wootters(clip_to_physical(rho).matrix()), clipped};
}

DensityOperator clip_to_physical(const DensityOperator &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    double total = ev.sum();
    if (total <= 0) {
        throw std::domain_error("clip_to_physical: operator has no positive part");
    }
    ev /= total;
    Eigen::MatrixXcd m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    return DensityOperator(hermitian_part(m), rho.labels());
}

double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Eigen::MatrixXcd diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(diff), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    const cplx i{0, 1};
    Eigen::Matrix2cd m;
    m << 0, -i, i, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd pauli(int axis) {
    switch (axis) {
        case 0:
            return pauli_x();
        case 1:
            return pauli_y();
        case 2:
            return pauli_z();
        default:
            throw std::invalid_argument("pauli: axis must be 0, 1 or 2");
    }
}

Eigen::Matrix2cd bloch_operator(const Eigen::Vector3d &axis) {
    return axis(0) * pauli_x() + axis(1) * pauli_y() + axis(2) * pauli_z();
}

Eigen::Matrix2cd bloch_projector(const Eigen::Vector3d &axis, bool plus) {
    double sign = plus ? 1.0 : -1.0;
    return (Eigen::Matrix2cd::Identity() + sign * bloch_operator(axis)) / 2.0;
}

Eigen::Vector3d bloch_vector(const StateVector &psi) {
    if (psi.dim() != 2) {
        throw std::invalid_argument("bloch_vector requires a single qubit");
    }
    Eigen::Vector2cd v = psi.amplitudes();
    Eigen::Vector3d out;
    for (int k = 0; k < 3; ++k) {
        out(k) = (v.adjoint() * pauli(k) * v)(0, 0).real();
    }
    return out / v.squaredNorm();
}

}  // namespace switchsim
