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
#include <iosfwd>
#include <string>
#include <vector>

#include "invkrr/bounds.hpp"
#include "invkrr/config.hpp"
#include "invkrr/domain.hpp"
#include "invkrr/effdim.hpp"
#include "invkrr/krr.hpp"

namespace invkrr {

struct GapEstimate {
  double gap = 0.0;
  double std_error = 0.0;
};

// Empirical Delta(f, fbar): mean over test points of
// (f(x) - f*(x))^2 - (fbar(x) - f*(x))^2, with the paired-difference SE.
GapEstimate estimate_gap(const KrrModel& model, const GroupRep& rep, const TargetFn& target,
                         const Points& test_x);

// Exact expectation under the uniform measure on `domain` (SE = 0).
GapEstimate estimate_gap(const KrrModel& model, const GroupRep& rep, const TargetFn& target,
                         const DiscreteDomain& domain);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;
  double gap_se = 0.0;
};

struct GapAggregate {
  double mean_gap = 0.0;
  double se = 0.0;
  double t = 0.0;  // NaN when theta is not a multiple of the ones vector
  BoundReport bound;
  bool bound_holds = false;   // mean_gap >= bound - 3 se
  bool nonnegative = false;   // mean_gap >= -3 se
  std::string verdict;        // "pass" iff both of the above hold
};

struct GapReport {
  ExperimentConfig config;
  std::vector<TrialRow> trials;
  GapAggregate aggregate;
};

// Runs cfg.trials independent trials (train, fit, estimate the gap on a
// fresh test set) on up to `workers` threads, then evaluates the bound.
// Output is identical for any worker count.
GapReport run_gap_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

void write_trials_csv(std::ostream& out, const GapReport& report);
void write_aggregate_csv(std::ostream& out, const GapReport& report, bool header = true);

// Writes <dir>/<prefix>_trials.csv and <dir>/<prefix>_aggregate.csv.
void write_report_files(const GapReport& report, const std::filesystem::path& dir,
                        const std::string& prefix);

std::string format_number(double value);

}  // namespace invkrr
