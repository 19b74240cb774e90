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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace switchsim::testing {

/// Maximal CHSH value by direct search over party 1's axes, independent of
/// any singular value decomposition. For fixed a, a′ the best party-2 axes
/// are analytic, giving S = |Tᵀ(a + a′)| + |Tᵀ(a − a′)|. A spherical grid
/// seeds a shrinking-step hill climb over the four angles.
inline double chsh_grid_search(const Eigen::Matrix3d &t, int n_theta = 16, int n_phi = 32) {
    auto axis = [](double th, double ph) {
        return Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    };
    auto score = [&](const double *x) {
        Eigen::Vector3d a = axis(x[0], x[1]);
        Eigen::Vector3d ap = axis(x[2], x[3]);
        return (t.transpose() * (a + ap)).norm() + (t.transpose() * (a - ap)).norm();
    };
    const double pi = std::numbers::pi;
    std::vector<Eigen::Vector2d> grid;
    for (int i = 0; i <= n_theta; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            grid.emplace_back(pi * i / n_theta, 2 * pi * j / n_phi);
        }
    }
    double best = -1;
    double x[4] = {0, 0, 0, 0};
    for (const auto &g1 : grid) {
        for (const auto &g2 : grid) {
            double y[4] = {g1(0), g1(1), g2(0), g2(1)};
            double s = score(y);
            if (s > best) {
                best = s;
                std::copy(y, y + 4, x);
            }
        }
    }
    for (double step = pi / n_theta; step > 1e-9; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int k = 0; k < 4; ++k) {
                for (double dir : {1.0, -1.0}) {
                    double y[4];
                    std::copy(x, x + 4, y);
                    y[k] += dir * step;
                    double s = score(y);
                    if (s > best + 1e-15) {
                        best = s;
                        std::copy(y, y + 4, x);
                        improved = true;
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace switchsim::testing
