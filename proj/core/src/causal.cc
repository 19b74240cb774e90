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

#include "switchsim/causal.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "switchsim/csv.h"
#include "switchsim/tolerances.h"

namespace switchsim {

namespace {

Eigen::Vector2cd ket_from_bloch(const Eigen::Vector3d &axis) {
    Eigen::Vector3d n = axis.normalized();
    double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
    double phi = std::atan2(n(1), n(0));
    return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
}

Eigen::Vector3d random_axis(Rng &rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d v;
    do {
        v = {g(rng), g(rng), g(rng)};
    } while (v.norm() < 1e-6);
    return v.normalized();
}

Eigen::Vector2cd single_qubit(const StateVector &psi, const char *name) {
    if (psi.num_qubits() != 1 || !psi.is_normalized()) {
        throw std::invalid_argument(std::string(name) + " must be a normalised single-qubit state");
    }
    return psi.amplitudes();
}

void check_inputs(const Instrument &alice, const Instrument &bob, const std::vector<Eigen::Vector3d> &charlie) {
    Instrument::make(alice.settings);
    Instrument::make(bob.settings);
    if (charlie.empty()) {
        throw std::invalid_argument("at least one Charlie setting is required");
    }
    for (const auto &c : charlie) {
        if (!c.allFinite() || std::abs(c.norm() - 1.0) > tol::kAlgebraic) {
            throw std::invalid_argument("Charlie settings must be unit vectors");
        }
    }
}

}  // namespace

Instrument Instrument::make(std::vector<std::vector<Eigen::Matrix2cd>> settings) {
    if (settings.empty()) {
        throw std::invalid_argument("instrument needs at least one setting");
    }
    for (size_t x = 0; x < settings.size(); ++x) {
        const auto &branches = settings[x];
        if (branches.empty() || branches.size() > 2) {
            throw std::invalid_argument("instrument setting " + std::to_string(x) + " must have one or two branches");
        }
        Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
        for (const auto &k : branches) {
            if (!k.allFinite()) {
                throw std::invalid_argument("instrument setting " + std::to_string(x) + " has a non-finite entry");
            }
            sum += k.adjoint() * k;
        }
        if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > tol::kAlgebraic) {
            throw std::invalid_argument("instrument setting " + std::to_string(x) + " is not trace preserving");
        }
    }
    return {std::move(settings)};
}

Instrument unitary_instrument(const std::vector<GateSpec> &gates) {
    std::vector<std::vector<Eigen::Matrix2cd>> s;
    for (const auto &g : gates) {
        s.push_back({g.matrix});
    }
    return Instrument::make(std::move(s));
}

std::vector<Eigen::Matrix2cd> measure_reprepare(const Eigen::Vector3d &measure,
                                                const std::array<Eigen::Vector3d, 2> &prepare) {
    if (!measure.allFinite() || std::abs(measure.norm() - 1.0) > tol::kAlgebraic) {
        throw std::invalid_argument("measure_reprepare: measurement axis must be a unit vector");
    }
    std::vector<Eigen::Matrix2cd> out;
    for (int a = 0; a < 2; ++a) {
        if (!prepare[a].allFinite() || std::abs(prepare[a].norm() - 1.0) > tol::kAlgebraic) {
            throw std::invalid_argument("measure_reprepare: prepared Bloch vectors must be unit vectors");
        }
        Eigen::Vector2cd m = ket_from_bloch(a == 0 ? measure : Eigen::Vector3d(-measure));
        out.push_back(ket_from_bloch(prepare[a]) * m.adjoint());
    }
    return out;
}

Instrument basis_instrument(const Eigen::Vector3d &measure, const Eigen::Vector3d &prepare) {
    return Instrument::make({measure_reprepare(measure, {prepare, -prepare})});
}

Instrument random_measure_reprepare(Rng &rng, size_t num_settings) {
    std::vector<std::vector<Eigen::Matrix2cd>> s;
    for (size_t x = 0; x < num_settings; ++x) {
        Eigen::Vector3d m = random_axis(rng);
        Eigen::Vector3d p0 = random_axis(rng);
        Eigen::Vector3d p1 = random_axis(rng);
        s.push_back(measure_reprepare(m, {p0, p1}));
    }
    return Instrument::make(std::move(s));
}

BehaviorTable::BehaviorTable(size_t nx, size_t ny, size_t nz) : nx_(nx), ny_(ny), nz_(nz), p_(nx * ny * nz * 8, 0.0) {
    if (nx == 0 || ny == 0 || nz == 0) {
        throw std::invalid_argument("behavior table needs at least one setting per party");
    }
}

size_t BehaviorTable::index(size_t x, size_t y, size_t z, int a, int b, int c) const {
    if (x >= nx_ || y >= ny_ || z >= nz_ || a < 0 || a > 1 || b < 0 || b > 1 || c < 0 || c > 1) {
        throw std::out_of_range("behavior table index out of range");
    }
    return ((((x * ny_ + y) * nz_ + z) * 2 + static_cast<size_t>(a)) * 2 + static_cast<size_t>(b)) * 2 +
           static_cast<size_t>(c);
}

double &BehaviorTable::at(size_t x, size_t y, size_t z, int a, int b, int c) {
    return p_[index(x, y, z, a, b, c)];
}

double BehaviorTable::at(size_t x, size_t y, size_t z, int a, int b, int c) const {
    return p_[index(x, y, z, a, b, c)];
}

double BehaviorTable::normalization_error() const {
    double worst = 0;
    for (size_t x = 0; x < nx_; ++x) {
        for (size_t y = 0; y < ny_; ++y) {
            for (size_t z = 0; z < nz_; ++z) {
                double s = 0;
                for (int k = 0; k < 8; ++k) {
                    s += at(x, y, z, k >> 2, (k >> 1) & 1, k & 1);
                }
                worst = std::max(worst, std::abs(s - 1.0));
            }
        }
    }
    return worst;
}

double BehaviorTable::signaling_error() const {
    double worst = 0;
    for (size_t x = 0; x < nx_; ++x) {
        for (size_t y = 0; y < ny_; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    double ref = at(x, y, 0, a, b, 0) + at(x, y, 0, a, b, 1);
                    for (size_t z = 1; z < nz_; ++z) {
                        worst = std::max(worst, std::abs(at(x, y, z, a, b, 0) + at(x, y, z, a, b, 1) - ref));
                    }
                }
            }
        }
    }
    return worst;
}

void BehaviorTable::validate(double tolerance) const {
    for (double v : p_) {
        if (!std::isfinite(v) || v < -tolerance || v > 1 + tolerance) {
            throw std::invalid_argument("behavior table entry outside [0, 1]");
        }
    }
    if (normalization_error() > tolerance) {
        throw std::invalid_argument("behavior table slice does not sum to 1");
    }
    if (signaling_error() > tolerance) {
        throw std::invalid_argument("behavior table lets Charlie's setting signal to Alice and Bob");
    }
}

static const std::vector<std::string> kBehaviorHeader = {"x", "y", "z", "a", "b", "c", "p"};

void write_behavior_csv(std::ostream &out, const BehaviorTable &t) {
    out << csv::join(kBehaviorHeader) << '\n';
    for (size_t x = 0; x < t.nx(); ++x) {
        for (size_t y = 0; y < t.ny(); ++y) {
            for (size_t z = 0; z < t.nz(); ++z) {
                for (int k = 0; k < 8; ++k) {
                    int a = k >> 2, b = (k >> 1) & 1, c = k & 1;
                    out << csv::join({std::to_string(x), std::to_string(y), std::to_string(z), std::to_string(a),
                                      std::to_string(b), std::to_string(c), csv::format(t.at(x, y, z, a, b, c))})
                        << '\n';
                }
            }
        }
    }
}

BehaviorTable read_behavior_csv(std::istream &in) {
    struct Entry {
        size_t line;
        long long idx[6];
        double p;
    };
    std::vector<Entry> entries;
    long long nx = 0, ny = 0, nz = 0;
    for (const auto &row : csv::read(in, kBehaviorHeader)) {
        Entry e{row.line, {}, csv::to_double(row, 6)};
        for (int k = 0; k < 6; ++k) {
            e.idx[k] = csv::to_int(row, k);
            if (e.idx[k] < 0 || (k >= 3 && e.idx[k] > 1)) {
                throw std::runtime_error("csv line " + std::to_string(row.line) + ": index out of range");
            }
        }
        nx = std::max(nx, e.idx[0] + 1);
        ny = std::max(ny, e.idx[1] + 1);
        nz = std::max(nz, e.idx[2] + 1);
        entries.push_back(e);
    }
    if (entries.empty()) {
        throw std::runtime_error("behavior table is empty");
    }
    BehaviorTable t(static_cast<size_t>(nx), static_cast<size_t>(ny), static_cast<size_t>(nz));
    std::vector<bool> seen(t.values().size(), false);
    for (const auto &e : entries) {
        auto x = static_cast<size_t>(e.idx[0]), y = static_cast<size_t>(e.idx[1]), z = static_cast<size_t>(e.idx[2]);
        int a = static_cast<int>(e.idx[3]), b = static_cast<int>(e.idx[4]), c = static_cast<int>(e.idx[5]);
        size_t flat = ((((x * t.ny() + y) * t.nz() + z) * 2 + a) * 2 + b) * 2 + c;
        if (seen[flat]) {
            throw std::runtime_error("csv line " + std::to_string(e.line) + ": duplicate entry");
        }
        seen[flat] = true;
        t.at(x, y, z, a, b, c) = e.p;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw std::runtime_error("behavior table is missing entries");
    }
    return t;
}

std::vector<Eigen::Vector3d> default_charlie_settings() {
    return {Eigen::Vector3d::UnitX(), Eigen::Vector3d(std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4), 0)};
}

BehaviorTable switch_behavior(const Instrument &alice, const Instrument &bob, const StateVector &control_in,
                              const StateVector &target_in, const std::vector<Eigen::Vector3d> &charlie_settings) {
    check_inputs(alice, bob, charlie_settings);
    Eigen::Vector2cd ctl = single_qubit(control_in, "control");
    Eigen::Vector2cd tgt = single_qubit(target_in, "target");
    BehaviorTable out(alice.num_settings(), bob.num_settings(), charlie_settings.size());
    for (size_t x = 0; x < alice.num_settings(); ++x) {
        const auto &ka = alice.settings[x];
        for (size_t y = 0; y < bob.num_settings(); ++y) {
            const auto &kb = bob.settings[y];
            for (size_t a = 0; a < ka.size(); ++a) {
                for (size_t b = 0; b < kb.size(); ++b) {
                    Eigen::Vector2cd ab = kb[b] * (ka[a] * tgt);
                    Eigen::Vector2cd ba = ka[a] * (kb[b] * tgt);
                    for (size_t z = 0; z < charlie_settings.size(); ++z) {
                        for (int c = 0; c < 2; ++c) {
                            Eigen::Vector2cd m = ket_from_bloch(c == 0 ? charlie_settings[z]
                                                                       : Eigen::Vector3d(-charlie_settings[z]));
                            Eigen::Vector2cd amp = std::conj(m(0)) * ctl(0) * ab + std::conj(m(1)) * ctl(1) * ba;
                            out.at(x, y, z, static_cast<int>(a), static_cast<int>(b), c) = amp.squaredNorm();
                        }
                    }
                }
            }
        }
    }
    return out;
}

BehaviorTable ordered_behavior(CausalOrder order, const Instrument &alice, const Instrument &bob,
                               const StateVector &control_in, const StateVector &target_in,
                               const std::vector<Eigen::Vector3d> &charlie_settings) {
    BehaviorTable sw = switch_behavior(alice, bob, control_in, target_in, charlie_settings);
    Eigen::Vector2cd tgt = single_qubit(target_in, "target");
    BehaviorTable out(sw.nx(), sw.ny(), sw.nz());
    for (size_t x = 0; x < sw.nx(); ++x) {
        const auto &ka = alice.settings[x];
        for (size_t y = 0; y < sw.ny(); ++y) {
            const auto &kb = bob.settings[y];
            for (size_t a = 0; a < ka.size(); ++a) {
                for (size_t b = 0; b < kb.size(); ++b) {
                    Eigen::Vector2cd v = order == CausalOrder::kAliceFirst ? Eigen::Vector2cd(kb[b] * (ka[a] * tgt))
                                                                           : Eigen::Vector2cd(ka[a] * (kb[b] * tgt));
                    double pab = v.squaredNorm();
                    int ia = static_cast<int>(a), ib = static_cast<int>(b);
                    for (size_t z = 0; z < sw.nz(); ++z) {
                        double s0 = sw.at(x, y, z, ia, ib, 0);
                        double s1 = sw.at(x, y, z, ia, ib, 1);
                        double norm = s0 + s1;
                        double c0 = norm > tol::kUnreachable ? s0 / norm : 0.5;
                        out.at(x, y, z, ia, ib, 0) = pab * c0;
                        out.at(x, y, z, ia, ib, 1) = pab * (1.0 - c0);
                    }
                }
            }
        }
    }
    return out;
}

CausalDecomposition find_causal_decomposition(const BehaviorTable &p, const BehaviorTable &p_a,
                                              const BehaviorTable &p_b, double tolerance) {
    auto same_shape = [&](const BehaviorTable &q) {
        return q.nx() == p.nx() && q.ny() == p.ny() && q.nz() == p.nz();
    };
    if (!same_shape(p_a) || !same_shape(p_b)) {
        throw std::invalid_argument("find_causal_decomposition: tables have different settings");
    }
    const auto &v = p.values();
    const auto &va = p_a.values();
    const auto &vb = p_b.values();
    double num = 0, den = 0, spread = 0;
    for (size_t k = 0; k < v.size(); ++k) {
        double d = va[k] - vb[k];
        num += d * (v[k] - vb[k]);
        den += d * d;
        spread = std::max(spread, std::abs(d));
    }
    CausalDecomposition out;
    out.identifiable = spread > tolerance;
    out.zeta = out.identifiable ? num / den : 0.5;
    for (size_t k = 0; k < v.size(); ++k) {
        out.residual = std::max(out.residual, std::abs(v[k] - out.zeta * va[k] - (1 - out.zeta) * vb[k]));
    }
    out.feasible = out.residual < tolerance && out.zeta >= -tolerance && out.zeta <= 1 + tolerance;
    return out;
}

}  // namespace switchsim
