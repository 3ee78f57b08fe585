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

#include "invkrr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace invkrr {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("config key '" + std::string(key) + "': cannot parse '" +
                          std::string(text) + "' as a number");
  }
  return value;
}

const std::string& required(const ConfigMap& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end() || trim(it->second).empty()) {
    throw ValidationError("missing required key '" + key + "'");
  }
  return it->second;
}

template <typename T>
void optional_number(const ConfigMap& values, const std::string& key, T& out) {
  if (const auto it = values.find(key); it != values.end()) out = parse_number<T>(it->second, key);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "group", "kernel", "d",    "n",    "n_test", "trials",      "rho",
      "sigma", "theta",  "seed", "mode", "seed_points", "effdim_m"};
  return keys;
}

ConfigMap parse_key_values(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                            "'");
    }
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str());
}

ExperimentConfig build_config(const ConfigMap& values) {
  ExperimentConfig cfg;
  cfg.group = required(values, "group");
  cfg.kernel = required(values, "kernel");
  cfg.d = parse_number<int>(required(values, "d"), "d");
  cfg.n = parse_number<Eigen::Index>(required(values, "n"), "n");
  cfg.rho = parse_number<double>(required(values, "rho"), "rho");
  optional_number(values, "n_test", cfg.n_test);
  optional_number(values, "trials", cfg.trials);
  optional_number(values, "sigma", cfg.sigma);
  optional_number(values, "seed", cfg.seed);
  optional_number(values, "effdim_m", cfg.effdim_m);
  if (const auto it = values.find("theta"); it != values.end()) cfg.theta = it->second;
  if (const auto it = values.find("seed_points"); it != values.end()) cfg.seed_points = it->second;
  if (const auto it = values.find("mode"); it != values.end()) {
    if (it->second == "mc") {
      cfg.mode = ExperimentMode::kMonteCarlo;
    } else if (it->second == "exact") {
      cfg.mode = ExperimentMode::kExactDiscrete;
    } else {
      throw ValidationError("config key 'mode': expected 'mc' or 'exact', got '" + it->second + "'");
    }
  }

  if (cfg.d < 1) throw ValidationError("config key 'd' must be >= 1");
  if (cfg.n < 1) throw ValidationError("config key 'n' must be >= 1");
  if (cfg.n_test < 1) throw ValidationError("config key 'n_test' must be >= 1");
  if (cfg.trials < 1) throw ValidationError("config key 'trials' must be >= 1");
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) {
    throw ValidationError("config key 'rho' must be > 0");
  }
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
    throw ValidationError("config key 'sigma' must be >= 0");
  }
  if (cfg.effdim_m < 2) throw ValidationError("config key 'effdim_m' must be >= 2");
  if (cfg.mode == ExperimentMode::kExactDiscrete && trim(cfg.seed_points).empty()) {
    throw ValidationError("mode=exact requires key 'seed_points'");
  }
  parse_theta(cfg.theta, cfg.d);
  if (cfg.mode == ExperimentMode::kExactDiscrete) parse_points(cfg.seed_points, cfg.d);
  return cfg;
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(text.substr(0, comma), "vector"));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

ThetaSpec parse_theta(std::string_view spec, int d) {
  spec = trim(spec);
  ThetaSpec out;
  if (spec.starts_with("t:")) {
    const double t = parse_number<double>(spec.substr(2), "theta");
    out.t = t;
    out.raw = Vector::Constant(d, t);
    return out;
  }
  const auto values = parse_doubles(spec);
  if (static_cast<int>(values.size()) != d) {
    throw ValidationError("config key 'theta': expected " + std::to_string(d) +
                          " components, got " + std::to_string(values.size()));
  }
  out.raw = Eigen::Map<const Vector>(values.data(), d);
  return out;
}

Points parse_points(std::string_view spec, int d) {
  std::vector<std::vector<double>> rows;
  while (true) {
    const auto semi = spec.find(';');
    const auto item = trim(spec.substr(0, semi));
    if (!item.empty()) rows.push_back(parse_doubles(item));
    if (semi == std::string_view::npos) break;
    spec = spec.substr(semi + 1);
  }
  if (rows.empty()) throw ValidationError("point list is empty");
  Points out(d, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (static_cast<int>(rows[j].size()) != d) {
      throw ValidationError("point " + std::to_string(j) + " has " +
                            std::to_string(rows[j].size()) + " components, expected " +
                            std::to_string(d));
    }
    out.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(rows[j].data(), d);
  }
  return out;
}

}  // namespace invkrr
