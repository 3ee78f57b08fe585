// Copyright 2026 The invkrr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace invkrr {

using Rng = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea, Flood 2014):
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^= z >> 31
std::uint64_t mix64(std::uint64_t z);

// Seed for stream `index` under `master`: mix64(master ^ mix64(index + 0x9E3779B97F4A7C15)).
// Depends only on (master, index), so trial results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace invkrr
