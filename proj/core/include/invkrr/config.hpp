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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invkrr/common.hpp"

namespace invkrr {

enum class ExperimentMode { kMonteCarlo, kExactDiscrete };

struct ExperimentConfig {
  std::string group;
  std::string kernel;
  int d = 0;
  Eigen::Index n = 0;
  Eigen::Index n_test = 2000;
  int trials = 100;
  double rho = 0.0;
  double sigma = 1.0;
  std::string theta = "t:1";  // "t:<value>" for t*1, or comma-separated raw vector
  std::uint64_t seed = 0;
  ExperimentMode mode = ExperimentMode::kMonteCarlo;
  std::string seed_points;  // exact mode: "x1,x2,...;y1,y2,...;..."
  Eigen::Index effdim_m = 100000;  // MC sample size for general-bound ingredients
};

// Flat key=value text. '#' starts a comment; blank lines are skipped.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

// Recognised keys, in documentation order.
const std::vector<std::string>& config_keys();

// Throws ValidationError naming the offending line for malformed input or
// unknown keys.
ConfigMap parse_key_values(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path& path);

// Builds and validates a config. Required keys: group, kernel, d, n, rho.
ExperimentConfig build_config(const ConfigMap& values);

// Raw theta vector for a theta spec in dimension d; `t` is set for "t:" specs.
struct ThetaSpec {
  Vector raw;
  std::optional<double> t;
};
ThetaSpec parse_theta(std::string_view spec, int d);

// "1,0;0,1" -> points (1,0) and (0,1), one per column.
Points parse_points(std::string_view spec, int d);

// Comma-separated doubles.
std::vector<double> parse_doubles(std::string_view text);

}  // namespace invkrr
