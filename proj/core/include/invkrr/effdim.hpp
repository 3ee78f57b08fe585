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
#include <functional>
#include <vector>

#include "invkrr/common.hpp"
#include "invkrr/domain.hpp"
#include "invkrr/group.hpp"
#include "invkrr/kernel.hpp"

namespace invkrr {

enum class Quantity { kDimEff, kDimEffAveraged, kDimEffPerp, kBiasTerm };
enum class EstimateMode { kMonteCarlo, kExactDiscrete };

struct EffDimEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 in exact mode; +inf when the jackknife is undefined
  EstimateMode mode = EstimateMode::kMonteCarlo;
  Eigen::Index sample_size = 0;
  Quantity quantity = Quantity::kDimEff;

  bool nonnegative() const {
    return mode == EstimateMode::kExactDiscrete ? value >= -1e-10 : value >= -3.0 * std_error;
  }
};

// Monte Carlo double integrals are off-diagonal U-statistics. Above this many
// points the sample is split into near-equal consecutive blocks and only
// within-block pairs are used, which keeps the estimator unbiased at O(m * block)
// kernel evaluations.
inline constexpr Eigen::Index kDefaultPairBlock = 256;

// j(x, x) = integral of k(x, z)^2 over z ~ Unif(S^{d-1}), from m fresh samples.
double j_diag_mc(const Evaluator& k, const VecRef& x, Eigen::Index m, std::uint64_t seed);

// dim_eff = integral of k(x, y)^2 over the product of uniform sphere measures.
// Standard error by delete-one jackknife over sample points.
EffDimEstimate effdim_mc(const Evaluator& k, int d, Eigen::Index m, std::uint64_t seed,
                         Eigen::Index block = kDefaultPairBlock);

// (1/m^2) sum_ij k(p_i, p_j)^2 over the domain. When `k` carries a group the
// domain must be closed under it.
EffDimEstimate effdim_exact_discrete(const Evaluator& k, const DiscreteDomain& domain);

using TargetFn = std::function<double(const VecRef&)>;

struct BiasTermEstimate {
  // integral of f*(y)^2 kperp(x, y)^2
  EffDimEstimate estimate;
  // integral of f*(y)^2 (k(x, y)^2 - kbar(x, y)^2) on the same sample
  double identity_value = 0.0;
  double discrepancy = 0.0;     // estimate.value - identity_value
  double discrepancy_se = 0.0;  // jackknife SE of the paired difference

  bool identity_holds() const {
    return estimate.mode == EstimateMode::kExactDiscrete
               ? std::abs(discrepancy) <= 1e-10
               : std::abs(discrepancy) <= 3.0 * discrepancy_se;
  }
};

BiasTermEstimate bias_term_mc(const Kernel& k, const GroupRep& rep, const TargetFn& target, int d,
                              Eigen::Index m, std::uint64_t seed,
                              Eigen::Index block = kDefaultPairBlock);

BiasTermEstimate bias_term_exact_discrete(const Kernel& k, const GroupRep& rep,
                                          const TargetFn& target, const DiscreteDomain& domain);

struct SpectrumEstimate {
  std::vector<double> eigenvalues;  // descending, clipped at 0
  double trace_sq = 0.0;            // sum of squared eigenvalues
  double diagonal_sq = 0.0;         // (1/m^2) sum_i k(x_i, x_i)^2, the i = j part of trace_sq
  Eigen::Index sample_size = 0;

  // trace_sq with the diagonal removed and rescaled by m/(m-1); equals the
  // complete off-diagonal U-statistic on the same sample.
  double offdiagonal_trace_sq() const;
};

// Eigenvalues of (1/m) Gram as estimates of the spectrum of the integral
// operator T_k.
SpectrumEstimate nystrom_spectrum(const Evaluator& k, const SphereDomain& domain, Eigen::Index m);
SpectrumEstimate nystrom_spectrum(const Evaluator& k, const DiscreteDomain& domain);

}  // namespace invkrr
