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

namespace switchsim::tol {

// Hermiticity, trace, unitarity and other exact algebraic identities.
inline constexpr double kAlgebraic = 1e-10;
// Anything that goes through an eigensolver or SVD.
inline constexpr double kSpectral = 1e-9;
// Norm of a state flagged as normalized.
inline constexpr double kNorm = 1e-12;
// Post-selection branches below this probability are treated as unreachable.
inline constexpr double kUnreachable = 1e-14;

}  // namespace switchsim::tol
