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

#include "invkrr/common.hpp"
#include "invkrr/group.hpp"

namespace invkrr {

enum class BoundFormula { kGeneral, kLinearClosedForm, kSymmetricGroup };

struct BoundIngredients {
  double n = 0.0;
  double rho = 0.0;
  double m_k = 0.0;
  double sigma_sq = 0.0;
  double dim_eff_perp = 0.0;
  double bias_term = 0.0;
};

struct BoundReport {
  double value = 0.0;
  BoundIngredients ingredients;
  BoundFormula formula = BoundFormula::kGeneral;
  // Set by sd_bound for d = 1, where S_1 is trivial and the bound is 0.
  bool degenerate = false;
};

// Lower bound on the expected generalisation gap E[Delta(f, fbar)]:
//
//   (sigma^2 dim_eff_perp + bias_term) / (sqrt(n) M_k + rho / sqrt(n))^2
//
// Throws ValidationError unless n >= 1, rho > 0, M_k > 0 and the remaining
// ingredients are >= 0.
BoundReport general_bound(double n, double rho, double m_k, double sigma_sq, double dim_eff_perp,
                          double bias_term);

// Closed form for the linear kernel on the unit sphere with an orthogonal
// representation, M_k = 1:
//
//   dim_eff_perp = (d - |Phi|_F^2) / d^2
//   bias_term    = (d - |Phi|_F^2) |theta|^2 / (d^2 (d + 2))
//
// `theta` must be invariant (|Phi theta - theta| <= 1e-10 max(1, |theta|));
// |Phi|_F^2 > d + 1e-10 is rejected.
BoundReport linear_bound(const AveragedRep& phi, const VecRef& theta, double n, double rho,
                         double sigma_sq = 1.0);

// The linear closed form for S_d with theta = t 1:
//
//   (d - 1) (sigma^2 (d + 2) + d t^2) / (d^2 (d + 2) (sqrt(n) + rho / sqrt(n))^2)
//
// which reduces to the familiar (d - 1)(d t^2 + d + 2) numerator at sigma^2 = 1.
BoundReport sd_bound(int d, double t, double n, double rho, double sigma_sq = 1.0);

}  // namespace invkrr
