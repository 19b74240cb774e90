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
#include <functional>
#include <random>

namespace switchsim {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser. Used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Child seed for stream `index` of a master seed; (seed, index) pairs never
/// depend on evaluation order, so parallel repetitions reproduce serial ones.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Rng make_stream(std::uint64_t seed, std::uint64_t index = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` worker threads
/// (0 = hardware concurrency). Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned threads = 0);

}  // namespace switchsim
