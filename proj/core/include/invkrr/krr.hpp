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

#include <string>
#include <string_view>
#include <vector>

#include "invkrr/common.hpp"
#include "invkrr/group.hpp"
#include "invkrr/kernel.hpp"

namespace invkrr {

struct RidgeConfig {
  double rho = 1.0;
  // Diagonal boosts tried in order, in units of tr(K)/n.
  std::vector<double> jitter_schedule{0.0, 1e-12, 1e-10, 1e-8};
};

// Kernel ridge regression solution alpha = (K + rho I)^{-1} Y together with
// the plain predictor f and the feature-averaged predictor fbar.
class KrrModel {
 public:
  const Points& train_points() const { return train_points_; }
  const Vector& alpha() const { return alpha_; }
  double rho() const { return rho_; }
  const Evaluator& kernel() const { return kernel_; }
  const std::string& group_id() const { return group_id_; }
  // |(K + rho I) alpha - Y| for the unjittered system.
  double residual_norm() const { return residual_norm_; }
  double jitter_used() const { return jitter_used_; }

  // f(x) = sum_i alpha_i k(x, x_i).
  double predict(const VecRef& x) const;
  Vector predict_batch(const Points& x) const;

  // fbar(x) = sum_i alpha_i kbar(x, x_i). Throws if the model was fitted for a
  // different group id.
  double predict_averaged(const GroupRep& rep, const VecRef& x) const;
  Vector predict_averaged_batch(const GroupRep& rep, const Points& x) const;

  // fperp(x) = sum_i alpha_i kperp(x, x_i) = f(x) - fbar(x).
  Vector predict_perp(const GroupRep& rep, const Points& x) const;

 private:
  friend KrrModel fit(const Evaluator&, const Points&, const Vector&, const RidgeConfig&,
                      std::string_view);
  KrrModel(Evaluator kernel, Points train, Vector alpha, double rho, std::string group_id)
      : kernel_(std::move(kernel)),
        train_points_(std::move(train)),
        alpha_(std::move(alpha)),
        rho_(rho),
        group_id_(std::move(group_id)) {}

  void check_group(const GroupRep& rep) const;

  Evaluator kernel_;
  Points train_points_;
  Vector alpha_;
  double rho_;
  std::string group_id_;
  double residual_norm_ = 0.0;
  double jitter_used_ = 0.0;
};

// Solves (K + rho I) alpha = Y by Cholesky, escalating through the jitter
// schedule and refining against the unjittered system. Throws NumericalError
// when no schedule entry reaches a residual of 1e-8 * max(1, |Y|).
KrrModel fit(const Evaluator& kernel, const Points& x, const Vector& y, const RidgeConfig& cfg,
             std::string_view group_id = {});

}  // namespace invkrr
